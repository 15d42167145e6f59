//! `BS_n` as an implicit graph: neighbourhoods, distances, the brute-force
//! small-cycle enumerator, canonical forms and walk validators.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{factorial, Form, Permutation};

pub fn neighbors(p: &Permutation) -> Vec<Permutation> {
    (1..p.n()).map(|i| p.apply_gen(i).unwrap()).collect()
}

/// Graph distance, computed as the inversion count of `p⁻¹ q`.
pub fn distance(p: &Permutation, q: &Permutation) -> Result<usize> {
    if p.n() != q.n() {
        return Err(Error::SizeMismatch(p.n(), q.n()));
    }
    let inv = p.inverse();
    let word: Vec<usize> = (1..=q.n()).map(|pos| inv.at(q.at(pos))).collect();
    Ok(Permutation::from_image(&word)?.inversions())
}

/// Breadth-first distances from `start` to every vertex, indexed by lex rank.
/// Allocates `n!` entries; intended for cross-checking [`distance`].
pub fn bfs_distances(start: &Permutation) -> Vec<u32> {
    let n = start.n();
    let mut dist = vec![u32::MAX; factorial(n) as usize];
    let mut queue = VecDeque::new();
    dist[start.lex_rank() as usize] = 0;
    queue.push_back(start.clone());
    while let Some(p) = queue.pop_front() {
        let d = dist[p.lex_rank() as usize];
        for q in neighbors(&p) {
            let slot = &mut dist[q.lex_rank() as usize];
            if *slot == u32::MAX {
                *slot = d + 1;
                queue.push_back(q);
            }
        }
    }
    dist
}

/// A simple cycle identified by the lex ranks of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    n: usize,
    vertices: Vec<u64>,
}

impl Cycle {
    pub fn from_vertices(n: usize, vertices: &[Permutation]) -> Cycle {
        let mut ranks: Vec<u64> = vertices.iter().map(Permutation::lex_rank).collect();
        ranks.sort_unstable();
        ranks.dedup();
        Cycle { n, vertices: ranks }
    }

    pub fn from_ranks(n: usize, mut ranks: Vec<u64>) -> Cycle {
        ranks.sort_unstable();
        ranks.dedup();
        Cycle { n, vertices: ranks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ranks(&self) -> &[u64] {
        &self.vertices
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.vertices.binary_search(&p.lex_rank()).is_ok()
    }

    pub fn permutations(&self) -> Vec<Permutation> {
        self.vertices
            .iter()
            .map(|&r| Permutation::lex_unrank(self.n, r).unwrap())
            .collect()
    }
}

/// Every simple `len`-cycle through `p`, found by exhaustive search over
/// generator-index sequences with no index repeated back to back
/// (cyclically). This is the brute-force oracle for the family census.
pub fn enumerate_cycles_through(p: &Permutation, len: usize) -> Result<BTreeSet<Cycle>> {
    if len != 4 && len != 6 {
        return Err(Error::UnsupportedLength(len));
    }
    let mut found = BTreeSet::new();
    let mut seq = Vec::with_capacity(len);
    let mut path = vec![p.clone()];
    search_closed_walks(p, len, &mut seq, &mut path, &mut found);
    Ok(found)
}

fn search_closed_walks(
    start: &Permutation,
    len: usize,
    seq: &mut Vec<usize>,
    path: &mut Vec<Permutation>,
    found: &mut BTreeSet<Cycle>,
) {
    let n = start.n();
    let last = path.last().unwrap().clone();
    for g in 1..n {
        if seq.last() == Some(&g) {
            continue;
        }
        let mut next = last.clone();
        next.swap_gen(g);
        if seq.len() + 1 == len {
            if seq[0] != g && next == *start {
                found.insert(Cycle::from_vertices(n, path));
            }
            continue;
        }
        if path.contains(&next) {
            continue;
        }
        seq.push(g);
        path.push(next);
        search_closed_walks(start, len, seq, path, found);
        path.pop();
        seq.pop();
    }
}

/// The lexicographically maximal index sequence among all readings of the
/// cycle (every start vertex, both directions). If the vertex set spans
/// several generator cycles, the maximum is taken over all of them.
pub fn canonical_form(c: &Cycle) -> Result<Form> {
    let len = c.len();
    if len < 4 || len % 2 != 0 {
        return Err(Error::MalformedCycle(format!(
            "{len} vertices; cycles of BS_n are even with at least 4 vertices"
        )));
    }
    let verts = c.permutations();
    // Adjacency inside the vertex set, labelled by generator.
    let adj: Vec<Vec<(usize, usize)>> = verts
        .iter()
        .map(|p| {
            (1..c.n())
                .filter_map(|g| {
                    let q = p.apply_gen(g).unwrap();
                    verts.iter().position(|v| *v == q).map(|idx| (idx, g))
                })
                .collect()
        })
        .collect();

    let mut best: Option<Vec<usize>> = None;
    let mut order = vec![0usize];
    let mut gens = Vec::new();
    let mut used = vec![false; len];
    used[0] = true;
    spanning_cycles(
        &adj,
        &mut order,
        &mut gens,
        &mut used,
        &mut |word: &[usize]| {
            for shift in 0..word.len() {
                let mut rot = word.to_vec();
                rot.rotate_left(shift);
                if best.as_ref().map_or(true, |b| rot > *b) {
                    best = Some(rot);
                }
            }
        },
    );
    best.map(Form::raw)
        .ok_or_else(|| Error::MalformedCycle("vertex set spans no generator cycle".into()))
}

fn spanning_cycles(
    adj: &[Vec<(usize, usize)>],
    order: &mut Vec<usize>,
    gens: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]),
) {
    let cur = *order.last().unwrap();
    if order.len() == adj.len() {
        if let Some(&(_, g)) = adj[cur].iter().find(|(v, _)| *v == order[0]) {
            gens.push(g);
            visit(gens);
            gens.pop();
        }
        return;
    }
    for &(next, g) in &adj[cur] {
        if used[next] {
            continue;
        }
        used[next] = true;
        order.push(next);
        gens.push(g);
        spanning_cycles(adj, order, gens, used, visit);
        gens.pop();
        order.pop();
        used[next] = false;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    RepeatVertex,
    BadStep,
    NotClosed,
    WrongLength,
    OutsideTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub step: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkReport {
    pub ok: bool,
    pub first_violation: Option<Violation>,
}

impl WalkReport {
    fn pass() -> Self {
        WalkReport {
            ok: true,
            first_violation: None,
        }
    }

    fn fail(step: usize, kind: ViolationKind) -> Self {
        WalkReport {
            ok: false,
            first_violation: Some(Violation { step, kind }),
        }
    }
}

/// Checks that `form`, walked from the identity, is a Hamiltonian cycle
/// (`closed`) or Hamiltonian path (open) of `BS_n`.
///
/// The length is checked before anything is allocated, so the `n!`-sized
/// visited set is never larger than the input itself.
pub fn validate_gray_code(n: usize, form: &Form, closed: bool) -> WalkReport {
    let Ok(start) = Permutation::identity(n) else {
        return WalkReport::fail(0, ViolationKind::WrongLength);
    };
    let order = factorial(n) as usize;
    let expected = if closed { order } else { order - 1 };
    if form.len() != expected {
        return WalkReport::fail(form.len(), ViolationKind::WrongLength);
    }
    if !closed {
        return validate_path(&start, form, None);
    }
    let mut visited = vec![false; order];
    visited[0] = true;
    let mut p = start.clone();
    for (step, &g) in form.indices().iter().enumerate() {
        if g == 0 || g >= n {
            return WalkReport::fail(step, ViolationKind::BadStep);
        }
        p.swap_gen(g);
        if step + 1 == form.len() {
            if p != start {
                return WalkReport::fail(step, ViolationKind::NotClosed);
            }
        } else {
            let r = p.lex_rank() as usize;
            if visited[r] {
                return WalkReport::fail(step, ViolationKind::RepeatVertex);
            }
            visited[r] = true;
        }
    }
    WalkReport::pass()
}

/// Checks that `form` walked from `start` never revisits a vertex and, when a
/// target set of lex ranks is given, stays inside it and covers all of it.
pub fn validate_path(
    start: &Permutation,
    form: &Form,
    target: Option<&HashSet<u64>>,
) -> WalkReport {
    let n = start.n();
    let mut seen = HashSet::with_capacity(form.len() + 1);
    let inside = |r: u64| target.map_or(true, |t| t.contains(&r));
    let r0 = start.lex_rank();
    if !inside(r0) {
        return WalkReport::fail(0, ViolationKind::OutsideTarget);
    }
    seen.insert(r0);
    let mut p = start.clone();
    for (step, &g) in form.indices().iter().enumerate() {
        if g == 0 || g >= n {
            return WalkReport::fail(step, ViolationKind::BadStep);
        }
        p.swap_gen(g);
        let r = p.lex_rank();
        if !inside(r) {
            return WalkReport::fail(step, ViolationKind::OutsideTarget);
        }
        if !seen.insert(r) {
            return WalkReport::fail(step, ViolationKind::RepeatVertex);
        }
    }
    if let Some(t) = target {
        if seen.len() != t.len() {
            return WalkReport::fail(form.len(), ViolationKind::WrongLength);
        }
    }
    WalkReport::pass()
}

/// Whether every length-`d` path from `τ = id · b_j b_{j+1} … b_{j+d-1}` back
/// to the identity shares an internal vertex with the forward path.
///
/// Paths that share only their endpoints count as non-intersecting. For
/// `d = 1` there are no internal vertices and the answer is `true`.
pub fn unique_return_path_check(n: usize, j: usize, d: usize) -> Result<bool> {
    if n < 3 || d == 0 || d + 2 > n || j == 0 || j + d > n {
        return Err(Error::InvalidParams(format!(
            "need n >= 3, 1 <= d <= n-2, 1 <= j <= n-d; got n={n}, j={j}, d={d}"
        )));
    }
    let pi = Permutation::identity(n)?;
    let forward = Form::raw((j..j + d).collect()).trace(&pi)?;
    if d == 1 {
        return Ok(true);
    }
    let tau = forward.last().unwrap().clone();
    let interior: HashSet<u64> = forward[1..d].iter().map(Permutation::lex_rank).collect();

    let mut all_intersect = true;
    let mut path = vec![tau];
    return_paths(&pi, d, &mut path, &mut |p: &[Permutation]| {
        if !p[1..d].iter().any(|v| interior.contains(&v.lex_rank())) {
            all_intersect = false;
        }
    });
    Ok(all_intersect)
}

fn return_paths(
    target: &Permutation,
    d: usize,
    path: &mut Vec<Permutation>,
    visit: &mut dyn FnMut(&[Permutation]),
) {
    let cur = path.last().unwrap().clone();
    let remaining = d + 1 - path.len();
    if remaining == 0 {
        if cur == *target {
            visit(path);
        }
        return;
    }
    for next in neighbors(&cur) {
        if path.contains(&next) || distance(&next, target).unwrap() > remaining - 1 {
            continue;
        }
        path.push(next);
        return_paths(target, d, path, visit);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::sjt_cycle;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_image(v).unwrap()
    }

    #[test]
    fn neighbourhoods() {
        let id3 = Permutation::identity(3).unwrap();
        assert_eq!(neighbors(&id3), vec![perm(&[2, 1, 3]), perm(&[1, 3, 2])]);
        let id5 = Permutation::identity(5).unwrap();
        assert_eq!(neighbors(&id5).len(), 4);
    }

    #[test]
    fn regular_bipartite_and_symmetric() {
        for n in 2..=5 {
            for p in Permutation::all(n).unwrap() {
                let nb = neighbors(&p);
                assert_eq!(nb.iter().collect::<HashSet<_>>().len(), n - 1);
                for q in &nb {
                    assert_ne!(q.parity(), p.parity());
                    assert!(neighbors(q).contains(&p));
                }
            }
        }
    }

    #[test]
    fn distance_examples() {
        let id4 = Permutation::identity(4).unwrap();
        assert_eq!(distance(&id4, &perm(&[4, 3, 2, 1])).unwrap(), 6);
        assert_eq!(distance(&id4, &id4).unwrap(), 0);
        assert!(distance(&id4, &Permutation::identity(5).unwrap()).is_err());
    }

    #[test]
    fn distance_matches_bfs_on_all_pairs() {
        for n in 2..=5 {
            for p in Permutation::all(n).unwrap() {
                let bfs = bfs_distances(&p);
                for (r, &d) in bfs.iter().enumerate() {
                    let q = Permutation::lex_unrank(n, r as u64).unwrap();
                    assert_eq!(distance(&p, &q).unwrap(), d as usize);
                }
            }
        }
    }

    #[test]
    fn oracle_single_vertex_counts() {
        let id3 = Permutation::identity(3).unwrap();
        assert_eq!(enumerate_cycles_through(&id3, 6).unwrap().len(), 1);
        let id4 = Permutation::identity(4).unwrap();
        assert_eq!(enumerate_cycles_through(&id4, 4).unwrap().len(), 1);
        // Exhaustive search; the closed form (n-2)+6(n-3)(n-4) would give 15.
        let id5 = Permutation::identity(5).unwrap();
        assert_eq!(enumerate_cycles_through(&id5, 6).unwrap().len(), 9);
        assert!(enumerate_cycles_through(&id5, 8).is_err());
    }

    #[test]
    fn oracle_cycles_close_under_their_forms() {
        let id5 = Permutation::identity(5).unwrap();
        for len in [4, 6] {
            for c in enumerate_cycles_through(&id5, len).unwrap() {
                assert_eq!(c.len(), len);
                assert!(c.contains(&id5));
                let form = canonical_form(&c).unwrap();
                for v in c.permutations() {
                    for f in (0..len).flat_map(|s| [form.rotated(s), form.rotated(s).reversed()]) {
                        let walk = f.trace(&v).unwrap();
                        assert_eq!(walk[len], v);
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_forms_of_small_cycles() {
        let id3 = Permutation::identity(3).unwrap();
        let bs3 = enumerate_cycles_through(&id3, 6).unwrap();
        let c = bs3.iter().next().unwrap();
        assert_eq!(canonical_form(c).unwrap().indices(), &[2, 1, 2, 1, 2, 1]);

        let id4 = Permutation::identity(4).unwrap();
        let c4 = enumerate_cycles_through(&id4, 4).unwrap();
        assert_eq!(
            canonical_form(c4.iter().next().unwrap()).unwrap().indices(),
            &[3, 1, 3, 1]
        );
    }

    #[test]
    fn canonical_form_ignores_listing_order() {
        let id4 = Permutation::identity(4).unwrap();
        let walk = Form::raw(vec![1, 3, 1, 3]).trace(&id4).unwrap();
        let a = Cycle::from_vertices(4, &walk[..4]);
        let mut shuffled = walk[..4].to_vec();
        shuffled.reverse();
        shuffled.rotate_left(1);
        let b = Cycle::from_vertices(4, &shuffled);
        assert_eq!(a, b);
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn canonical_form_rejects_malformed_sets() {
        let id4 = Permutation::identity(4).unwrap();
        let path = Form::raw(vec![1, 2, 3]).trace(&id4).unwrap();
        assert!(canonical_form(&Cycle::from_vertices(4, &path)).is_err());
        assert!(canonical_form(&Cycle::from_vertices(4, &path[..3])).is_err());
    }

    #[test]
    fn gray_code_validation() {
        let ok = validate_gray_code(3, &Form::raw(vec![2, 1, 2, 1, 2, 1]), true);
        assert!(ok.ok);
        let bad = validate_gray_code(3, &Form::raw(vec![2, 1, 2, 1, 1, 2]), true);
        assert_eq!(
            bad.first_violation,
            Some(Violation {
                step: 4,
                kind: ViolationKind::RepeatVertex
            })
        );
        assert!(validate_gray_code(4, &sjt_cycle(4).unwrap(), true).ok);

        let short = validate_gray_code(3, &Form::raw(vec![2, 1]), true);
        assert_eq!(
            short.first_violation.unwrap().kind,
            ViolationKind::WrongLength
        );
        let oob = validate_gray_code(3, &Form::raw(vec![2, 1, 2, 1, 2, 3]), true);
        assert_eq!(oob.first_violation.unwrap().kind, ViolationKind::BadStep);
        let open = Form::raw(vec![2, 1, 2, 1, 2]);
        assert!(validate_gray_code(3, &open, false).ok);
        let unclosed = validate_gray_code(
            4,
            &Form::raw([sjt_cycle(4).unwrap().indices()[..23].to_vec(), vec![3]].concat()),
            true,
        );
        assert!(!unclosed.ok);
    }

    #[test]
    fn sjt_validates_up_to_eight() {
        for n in 2..=8 {
            assert!(
                validate_gray_code(n, &sjt_cycle(n).unwrap(), true).ok,
                "n = {n}"
            );
        }
    }

    #[test]
    fn validate_path_with_target() {
        let id4 = Permutation::identity(4).unwrap();
        let c4: HashSet<u64> = Form::raw(vec![1, 3, 1, 3])
            .trace(&id4)
            .unwrap()
            .iter()
            .map(Permutation::lex_rank)
            .collect();
        assert!(validate_path(&id4, &Form::raw(vec![1, 3, 1]), Some(&c4)).ok);
        let r = validate_path(&id4, &Form::raw(vec![1, 3]), Some(&c4));
        assert_eq!(r.first_violation.unwrap().kind, ViolationKind::WrongLength);
        let r = validate_path(&id4, &Form::raw(vec![2]), Some(&c4));
        assert_eq!(
            r.first_violation.unwrap().kind,
            ViolationKind::OutsideTarget
        );
    }

    #[test]
    fn return_path_examples() {
        assert!(unique_return_path_check(5, 1, 3).unwrap());
        assert!(unique_return_path_check(4, 2, 2).unwrap());
        assert!(unique_return_path_check(6, 3, 1).unwrap());
        assert!(unique_return_path_check(4, 1, 3).is_err());
        assert!(unique_return_path_check(5, 3, 3).is_err());
    }
}
