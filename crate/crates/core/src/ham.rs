//! Hamiltonian cycles of `BS_n` lifted from a Hamiltonian cycle of the
//! factor graph `Γ_n ≅ J(n, 2)` of the generalized-prism cover.
//!
//! Consecutive prisms `Q_s`, `Q_{s+1}` share one element `j`; with
//! `i = Q_s \ Q_{s+1}` and `k = Q_{s+1} \ Q_s`, every vertex `[σ k i j]` of
//! `Q_s` is joined by a `b_{n-2}` edge to `[σ i k j]` in `Q_{s+1}`. Exits are
//! chosen so that each prism is entered and left at opposite parities, which
//! is exactly what [`PrismPathBuilder`] needs.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::validate_gray_code;
use crate::perm::{check_n, factorial, sjt_cycle, Form, Parity, Permutation, DEFAULT_N_CAP, MAX_N};
use crate::prisms::{cover, prism_of, PrismId, PrismPath, PrismPathBuilder};

/// The factor graph of the prism cover: 2-subsets of `{1..n}`, adjacent when
/// they meet in exactly one element.
#[derive(Debug, Clone)]
pub struct FactorGraph {
    n: usize,
    vertices: Vec<PrismId>,
}

impl FactorGraph {
    pub fn new(n: usize) -> Result<FactorGraph> {
        Ok(FactorGraph {
            n,
            vertices: cover(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[PrismId] {
        &self.vertices
    }

    pub fn adjacent(&self, a: &PrismId, b: &PrismId) -> bool {
        a.shared_with(b).is_some()
    }

    pub fn degree(&self, a: &PrismId) -> usize {
        self.vertices.iter().filter(|b| self.adjacent(a, b)).count()
    }

    /// Unordered edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(PrismId, PrismId)> {
        let mut out = Vec::new();
        for (x, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[x + 1..] {
                if self.adjacent(a, b) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }
}

pub fn factor_graph(n: usize) -> Result<FactorGraph> {
    FactorGraph::new(n)
}

/// Prism pairs joined by at least one `b_{n-2}` edge of `BS_n`, found by
/// sweeping every vertex. Independent of the intersection predicate.
pub fn factor_edges_from_bs(n: usize) -> Result<BTreeSet<(PrismId, PrismId)>> {
    check_n(n, 5, DEFAULT_N_CAP)?;
    let mut out = BTreeSet::new();
    for p in Permutation::all(n)? {
        let a = prism_of(&p)?;
        let b = prism_of(&p.apply_gen(n - 2)?)?;
        if a != b {
            out.insert((a.min(b), a.max(b)));
        }
    }
    Ok(out)
}

/// Revolving-door (minimal change) order of the `k`-subsets of `{1..n}`:
/// `R(n, k) = R(n-1, k) ++ reverse(R(n-1, k-1)) ∪ {n}`.
pub fn revolving_door(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    if k == n {
        return vec![(1..=n).collect()];
    }
    let mut out = revolving_door(n - 1, k);
    for mut tail in revolving_door(n - 1, k - 1).into_iter().rev() {
        tail.push(n);
        out.push(tail);
    }
    out
}

/// Every subset appears once and cyclically consecutive subsets share one element.
pub fn is_factor_cycle(n: usize, order: &[PrismId]) -> bool {
    let distinct: BTreeSet<_> = order.iter().collect();
    order.len() == n * (n - 1) / 2
        && distinct.len() == order.len()
        && order.iter().all(|q| q.n() == n)
        && (0..order.len()).all(|s| {
            order[s]
                .shared_with(&order[(s + 1) % order.len()])
                .is_some()
        })
}

/// A Hamiltonian cycle of the factor graph starting at the prism of the
/// identity, `{n-1, n}`.
pub fn factor_ham_cycle(n: usize) -> Result<Vec<PrismId>> {
    check_n(n, 5, MAX_N)?;
    let mut order = revolving_door(n, 2)
        .into_iter()
        .map(|s| PrismId::new(n, s[0], s[1]))
        .collect::<Result<Vec<_>>>()?;
    let home = PrismId::new(n, n - 1, n)?;
    let at = order.iter().position(|q| *q == home).unwrap();
    order.rotate_left(at);
    if is_factor_cycle(n, &order) {
        return Ok(order);
    }
    backtrack_factor_cycle(n, home)
}

fn backtrack_factor_cycle(n: usize, home: PrismId) -> Result<Vec<PrismId>> {
    fn extend(all: &[PrismId], path: &mut Vec<PrismId>, used: &mut BTreeSet<PrismId>) -> bool {
        let last = *path.last().unwrap();
        if path.len() == all.len() {
            return last.shared_with(&path[0]).is_some();
        }
        for q in all {
            if used.contains(q) || last.shared_with(q).is_none() {
                continue;
            }
            used.insert(*q);
            path.push(*q);
            if extend(all, path, used) {
                return true;
            }
            path.pop();
            used.remove(q);
        }
        false
    }
    let all = cover(n)?;
    let mut path = vec![home];
    let mut used: BTreeSet<PrismId> = [home].into();
    if extend(&all, &mut path, &mut used) {
        Ok(path)
    } else {
        Err(Error::Internal(format!(
            "no Hamiltonian cycle found in J({n},2)"
        )))
    }
}

fn transfer_roles(from: &PrismId, to: &PrismId) -> Result<(usize, usize, usize)> {
    let shared = from
        .shared_with(to)
        .ok_or_else(|| Error::NotAdjacent(from.to_string(), to.to_string()))?;
    let (a, b) = from.pair();
    let leaving = if a == shared { b } else { a };
    let (c, d) = to.pair();
    let arriving = if c == shared { d } else { c };
    Ok((leaving, arriving, shared))
}

/// Vertices `[σ k i j]` of `from` whose `b_{n-2}` neighbour lies in `to`,
/// in lexicographic order of the prefix `σ`.
pub fn exit_candidates(from: &PrismId, to: &PrismId) -> Result<Vec<Permutation>> {
    let n = from.n();
    let (i, k, j) = transfer_roles(from, to)?;
    let rest: Vec<usize> = (1..=n).filter(|&x| x != i && x != j && x != k).collect();
    let mut out = Vec::new();
    for prefix in Permutation::all(n - 3)? {
        let mut image: Vec<usize> = prefix.image().iter().map(|&v| rest[v - 1]).collect();
        image.extend([k, i, j]);
        out.push(Permutation::from_image(&image)?);
    }
    Ok(out)
}

/// The lexicographically smallest exit toward `to` whose parity differs from
/// `entry_parity`.
pub fn pick_exit(from: &PrismId, to: &PrismId, entry_parity: Parity) -> Result<Permutation> {
    exit_candidates(from, to)?
        .into_iter()
        .find(|p| p.parity() != entry_parity)
        .ok_or_else(|| Error::Internal(format!("no exit of opposite parity from {from} to {to}")))
}

/// Prism order plus the entry and exit vertex of every prism.
#[derive(Debug, Clone, Serialize)]
pub struct LiftPlan {
    pub n: usize,
    pub prisms: Vec<PrismId>,
    pub entries: Vec<Permutation>,
    pub exits: Vec<Permutation>,
}

impl LiftPlan {
    pub fn start(&self) -> &Permutation {
        &self.exits[0]
    }

    pub fn check(&self) -> Result<()> {
        let m = self.prisms.len();
        let bad = |msg: String| Err(Error::Internal(format!("lift plan: {msg}")));
        if !is_factor_cycle(self.n, &self.prisms) {
            return bad("prism order is not a factor-graph Hamiltonian cycle".into());
        }
        if self.entries.len() != m || self.exits.len() != m {
            return bad("entry/exit count does not match prism count".into());
        }
        let entry_parity = self.entries[0].parity();
        for s in 0..m {
            let q = &self.prisms[s];
            if !q.contains(&self.entries[s]) || !q.contains(&self.exits[s]) {
                return bad(format!("endpoint outside prism #{s} {q}"));
            }
            if self.entries[s].parity() != entry_parity || self.exits[s].parity() == entry_parity {
                return bad(format!("parity chain broken at prism #{s}"));
            }
            if self.exits[s].apply_gen(self.n - 2)? != self.entries[(s + 1) % m] {
                return bad(format!(
                    "exit of #{s} is not joined to entry of the next prism"
                ));
            }
        }
        Ok(())
    }
}

pub fn plan_lift(n: usize) -> Result<LiftPlan> {
    let prisms = factor_ham_cycle(n)?;
    let m = prisms.len();
    let start = exit_candidates(&prisms[0], &prisms[1])?.remove(0);
    let mut entries = vec![start.clone(); m];
    let mut exits = vec![start];
    for s in 1..m {
        let entry = exits[s - 1].apply_gen(n - 2)?;
        exits.push(pick_exit(&prisms[s], &prisms[(s + 1) % m], entry.parity())?);
        entries[s] = entry;
    }
    entries[0] = exits[m - 1].apply_gen(n - 2)?;
    let plan = LiftPlan {
        n,
        prisms,
        entries,
        exits,
    };
    plan.check()?;
    Ok(plan)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaseMode {
    /// SJT cycle of `BS_{n-2}` inside every prism.
    #[default]
    Sjt,
    /// Prism-lifted cycle of `BS_{n-2}` when `n - 2 ≥ 5`, SJT below.
    Recursive,
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub base: BaseMode,
    pub n_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            base: BaseMode::Sjt,
            n_cap: DEFAULT_N_CAP,
        }
    }
}

/// A certified Hamiltonian cycle: `form` walked from `start` visits every
/// vertex once and returns.
#[derive(Debug, Clone)]
pub struct HamCycle {
    pub start: Permutation,
    pub form: Form,
    pub plan: LiftPlan,
}

impl HamCycle {
    pub fn vertices(&self) -> Vec<Permutation> {
        let mut walk = self.form.trace(&self.start).unwrap();
        walk.pop();
        walk
    }
}

fn base_form(n: usize, opts: &BuildOptions) -> Result<Form> {
    match opts.base {
        BaseMode::Recursive if n - 2 >= 5 => Ok(build_hamiltonian_cycle(n - 2, opts)?.form),
        _ => sjt_cycle(n - 2),
    }
}

pub fn build_hamiltonian_cycle(n: usize, opts: &BuildOptions) -> Result<HamCycle> {
    check_n(n, 5, opts.n_cap.min(MAX_N))?;
    let plan = plan_lift(n)?;
    let builder = PrismPathBuilder::new(n, base_form(n, opts)?)?;
    let m = plan.prisms.len();

    let paths: Vec<PrismPath> = (0..m)
        .into_par_iter()
        .map(|s| {
            builder
                .build(plan.prisms[s], &plan.entries[s], &plan.exits[s])
                .map_err(|e| Error::InPrism {
                    index: s,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;

    let connector = n - 2;
    let mut indices = Vec::with_capacity(factorial(n) as usize);
    for s in (1..m).chain([0]) {
        indices.push(connector);
        indices.extend_from_slice(paths[s].steps.indices());
    }
    let form = Form::raw(indices);
    let report = validate_gray_code(n, &form, true);
    if !report.ok {
        return Err(Error::Internal(format!(
            "assembled cycle failed validation: {:?}",
            report.first_violation
        )));
    }
    Ok(HamCycle {
        start: plan.start().clone(),
        form,
        plan,
    })
}

pub fn generator_histogram(form: &Form) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for &g in form.indices() {
        *out.entry(g).or_insert(0) += 1;
    }
    out
}

/// Start of the lexicographically least rotation (two-pointer scan).
fn least_rotation(s: &[usize]) -> usize {
    let len = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < len && j < len && k < len {
        let (a, b) = (s[(i + k) % len], s[(j + k) % len]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Representative of a cyclic sequence up to rotation and reversal.
pub fn cyclic_canonical(seq: &[usize]) -> Vec<usize> {
    if seq.is_empty() {
        return Vec::new();
    }
    let mut fwd = seq.to_vec();
    let shift = least_rotation(&fwd);
    fwd.rotate_left(shift);
    let mut rev: Vec<usize> = seq.iter().rev().copied().collect();
    let shift = least_rotation(&rev);
    rev.rotate_left(shift);
    fwd.min(rev)
}

#[derive(Debug, Clone, Serialize)]
pub struct SjtComparison {
    pub n: usize,
    pub sjt_valid: bool,
    pub lift_valid: bool,
    pub distinct_up_to_symmetry: bool,
    pub sjt_histogram: BTreeMap<usize, usize>,
    pub lift_histogram: BTreeMap<usize, usize>,
}

pub fn compare_sjt(n: usize, opts: &BuildOptions) -> Result<SjtComparison> {
    let sjt = sjt_cycle(n)?;
    let lift = build_hamiltonian_cycle(n, opts)?;
    Ok(SjtComparison {
        n,
        sjt_valid: validate_gray_code(n, &sjt, true).ok,
        lift_valid: validate_gray_code(n, &lift.form, true).ok,
        distinct_up_to_symmetry: cyclic_canonical(sjt.indices())
            != cyclic_canonical(lift.form.indices()),
        sjt_histogram: generator_histogram(&sjt),
        lift_histogram: generator_histogram(&lift.form),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prism(n: usize, a: usize, b: usize) -> PrismId {
        PrismId::new(n, a, b).unwrap()
    }

    #[test]
    fn factor_graph_shapes() {
        let g5 = factor_graph(5).unwrap();
        assert_eq!(g5.vertices().len(), 10);
        assert!(g5.vertices().iter().all(|q| g5.degree(q) == 6));
        assert_eq!(g5.edges().len(), 30);
        let g7 = factor_graph(7).unwrap();
        assert_eq!(g7.vertices().len(), 21);
        assert!(g7.vertices().iter().all(|q| g7.degree(q) == 10));
        assert!(g5.adjacent(&prism(5, 1, 2), &prism(5, 2, 3)));
        assert!(!g5.adjacent(&prism(5, 1, 2), &prism(5, 3, 4)));
    }

    #[test]
    fn factor_adjacency_matches_connecting_edges() {
        for n in [5, 6] {
            let g = factor_graph(n).unwrap();
            let from_edges = factor_edges_from_bs(n).unwrap();
            let predicate: BTreeSet<_> = g.edges().into_iter().collect();
            assert_eq!(from_edges, predicate);
        }
    }

    #[test]
    fn revolving_door_small() {
        assert_eq!(
            revolving_door(4, 2),
            vec![
                vec![1, 2],
                vec![2, 3],
                vec![1, 3],
                vec![3, 4],
                vec![2, 4],
                vec![1, 4]
            ]
        );
    }

    #[test]
    fn hand_written_cycle_validates() {
        // {1,2},{2,3},{1,3},{3,4},{1,4},{2,4} wraps around through {2}.
        let order: Vec<_> = [(1, 2), (2, 3), (1, 3), (3, 4), (1, 4), (2, 4)]
            .iter()
            .map(|&(a, b)| PrismId::new(5, a, b).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0].shared_with(&w[1]).is_some()));
        assert_eq!(order[5].shared_with(&order[0]), Some(2));
    }

    #[test]
    fn factor_cycles_validate() {
        for n in 5..=12 {
            let order = factor_ham_cycle(n).unwrap();
            assert!(is_factor_cycle(n, &order), "n = {n}");
            assert_eq!(order[0], prism(n, n - 1, n));
        }
        assert_eq!(factor_ham_cycle(5).unwrap().len(), 10);
        assert_eq!(factor_ham_cycle(8).unwrap().len(), 28);
    }

    #[test]
    fn backtracking_fallback_finds_cycles() {
        for n in [5, 6] {
            let order = backtrack_factor_cycle(n, prism(n, n - 1, n)).unwrap();
            assert!(is_factor_cycle(n, &order));
        }
    }

    #[test]
    fn exit_selection_examples() {
        let from = prism(5, 4, 5);
        let to = prism(5, 3, 5);
        let exit = pick_exit(&from, &to, Parity::Even).unwrap();
        assert_eq!(exit.image(), vec![2, 1, 3, 4, 5]);
        assert_eq!(exit.apply_gen(3).unwrap().image(), vec![2, 1, 4, 3, 5]);
        assert!(to.contains(&exit.apply_gen(3).unwrap()));
        assert_eq!(
            pick_exit(&from, &to, Parity::Odd).unwrap().image(),
            vec![1, 2, 3, 4, 5]
        );
        assert!(pick_exit(&from, &prism(5, 1, 2), Parity::Odd).is_err());
    }

    #[test]
    fn exit_pool_splits_evenly_at_six() {
        let pool = exit_candidates(&prism(6, 5, 6), &prism(6, 4, 6)).unwrap();
        assert_eq!(pool.len(), 6);
        assert_eq!(
            pool.iter().filter(|p| p.parity() == Parity::Even).count(),
            3
        );
    }

    #[test]
    fn plans_satisfy_invariants() {
        for n in 5..=9 {
            let plan = plan_lift(n).unwrap();
            plan.check().unwrap();
            assert_eq!(plan.prisms.len(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn broken_plans_are_rejected() {
        let mut plan = plan_lift(5).unwrap();
        plan.exits.swap(1, 2);
        assert!(plan.check().is_err());
    }

    #[test]
    fn builds_certified_cycles() {
        for n in 5..=7 {
            let cycle = build_hamiltonian_cycle(n, &BuildOptions::default()).unwrap();
            assert_eq!(cycle.form.len() as u64, factorial(n));
            assert!(validate_gray_code(n, &cycle.form, true).ok);
            let verts = cycle.vertices();
            assert_eq!(verts[0], cycle.start);
            assert_eq!(
                verts.iter().collect::<BTreeSet<_>>().len() as u64,
                factorial(n)
            );
        }
        assert!(build_hamiltonian_cycle(4, &BuildOptions::default()).is_err());
        let capped = BuildOptions {
            n_cap: 6,
            ..BuildOptions::default()
        };
        assert!(build_hamiltonian_cycle(7, &capped).is_err());
    }

    #[test]
    fn recursive_base_builds() {
        let opts = BuildOptions {
            base: BaseMode::Recursive,
            ..BuildOptions::default()
        };
        let cycle = build_hamiltonian_cycle(7, &opts).unwrap();
        assert!(validate_gray_code(7, &cycle.form, true).ok);
        let sjt_based = build_hamiltonian_cycle(7, &BuildOptions::default()).unwrap();
        assert_ne!(cycle.form, sjt_based.form);
    }

    #[test]
    fn comparison_with_sjt() {
        let report = compare_sjt(5, &BuildOptions::default()).unwrap();
        assert!(report.sjt_valid && report.lift_valid);
        assert!(report.distinct_up_to_symmetry);
        assert!(report.lift_histogram[&4] >= 10);
        assert_eq!(
            generator_histogram(&sjt_cycle(3).unwrap()),
            [(1, 3), (2, 3)].into_iter().collect()
        );
    }

    #[test]
    fn canonical_rotation_examples() {
        assert_eq!(cyclic_canonical(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(cyclic_canonical(&[2, 1, 3]), vec![1, 2, 3]);
        assert_eq!(
            cyclic_canonical(&[2, 1, 2, 1, 2, 1]),
            vec![1, 2, 1, 2, 1, 2]
        );
    }

    proptest! {
        #[test]
        fn least_rotation_matches_brute_force(seq in prop::collection::vec(1usize..4, 1..24)) {
            let best = (0..seq.len())
                .map(|s| { let mut r = seq.clone(); r.rotate_left(s); r })
                .min()
                .unwrap();
            let mut got = seq.clone();
            got.rotate_left(least_rotation(&seq));
            prop_assert_eq!(got, best);
        }
    }
}
