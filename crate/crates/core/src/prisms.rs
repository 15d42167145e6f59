//! 6-prisms `P_6(i, k)`, generalized prisms `2-BS_{n-2}` and Hamiltonian
//! paths inside them.
//!
//! The generalized prism named by the pair `{a, b}` holds every permutation
//! whose last two entries are `a` and `b` in either order. Inside it the
//! generators `b_1..b_{n-3}` act within one of the two `BS_{n-2}` copies
//! and `b_{n-1}` is the rung between copies.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::validate_gray_code;
use crate::perm::{factorial, sjt_cycle, Form, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrismId {
    n: usize,
    pair: (usize, usize),
}

impl PrismId {
    pub fn new(n: usize, a: usize, b: usize) -> Result<PrismId> {
        if n < 5 || a == b || a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidParams(format!(
                "prism {{{a},{b}}} is not a pair of distinct elements of 1..={n} with n >= 5"
            )));
        }
        Ok(PrismId {
            n,
            pair: (a.min(b), a.max(b)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    pub fn has(&self, x: usize) -> bool {
        self.pair.0 == x || self.pair.1 == x
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.n() == self.n && {
            let (x, y) = (p.at(self.n - 1), p.at(self.n));
            (x.min(y), x.max(y)) == self.pair
        }
    }

    /// Number of vertices, `2 (n-2)!`.
    pub fn size(&self) -> usize {
        2 * factorial(self.n - 2) as usize
    }

    /// All member vertices in lexicographic order.
    pub fn vertices(&self) -> Vec<Permutation> {
        let rest: Vec<usize> = (1..=self.n).filter(|&x| !self.has(x)).collect();
        let mut out = Vec::with_capacity(self.size());
        for prefix in Permutation::all(self.n - 2).unwrap() {
            let body: Vec<usize> = prefix.image().iter().map(|&v| rest[v - 1]).collect();
            for tail in [[self.pair.0, self.pair.1], [self.pair.1, self.pair.0]] {
                let image: Vec<usize> = body.iter().copied().chain(tail).collect();
                out.push(Permutation::from_image(&image).unwrap());
            }
        }
        out.sort();
        out
    }

    /// The element shared with `other`, when the two prisms are adjacent.
    pub fn shared_with(&self, other: &PrismId) -> Option<usize> {
        let (a, b) = self.pair;
        match (other.has(a), other.has(b)) {
            (true, false) => Some(a),
            (false, true) => Some(b),
            _ => None,
        }
    }
}

impl fmt::Display for PrismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.pair.0, self.pair.1)
    }
}

impl Serialize for PrismId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.pair.0, self.pair.1].serialize(s)
    }
}

pub fn prism_of(p: &Permutation) -> Result<PrismId> {
    let n = p.n();
    if n < 5 {
        return Err(Error::SizeOutOfRange {
            n,
            min: 5,
            max: crate::perm::MAX_N,
        });
    }
    PrismId::new(n, p.at(n - 1), p.at(n))
}

/// The maximal cover of `BS_n` by generalized prisms: all `C(n, 2)` pairs.
pub fn cover(n: usize) -> Result<Vec<PrismId>> {
    crate::perm::check_n(n, 5, crate::perm::MAX_N)?;
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            out.push(PrismId::new(n, a, b)?);
        }
    }
    Ok(out)
}

/// Closed form `(b_k b_i b_{k-1} b_i)^3` of the 6-prism `P_6(i, k)`.
pub fn p6_form(i: usize, k: usize, n: usize) -> Result<Form> {
    if k < 2 || k >= n || i == 0 || i >= n {
        return Err(Error::InvalidParams(format!(
            "P6({i},{k}) needs 2 <= k <= n-1 and 1 <= i <= n-1 for n = {n}"
        )));
    }
    if (k.saturating_sub(2)..=k + 1).contains(&i) {
        return Err(Error::InvalidParams(format!(
            "b_{i} is not independent of b_{k} and b_{}",
            k - 1
        )));
    }
    Ok(Form::raw([k, i, k - 1, i].repeat(3)))
}

/// A Hamiltonian path of one generalized prism.
#[derive(Debug, Clone, Serialize)]
pub struct PrismPath {
    pub prism: PrismId,
    pub vertices: Vec<Permutation>,
    pub steps: Form,
}

impl PrismPath {
    pub fn start(&self) -> &Permutation {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Permutation {
        self.vertices.last().unwrap()
    }

    /// Mechanical check of every property a prism path must have.
    pub fn validate(&self) -> Result<()> {
        let n = self.prism.n();
        let fail = |msg: String| Err(Error::InvalidPath(msg));
        if self.vertices.len() != self.prism.size() {
            return fail(format!(
                "{} vertices, prism has {}",
                self.vertices.len(),
                self.prism.size()
            ));
        }
        if self.steps.len() + 1 != self.vertices.len() {
            return fail("step count does not match vertex count".into());
        }
        let mut seen = HashSet::with_capacity(self.vertices.len());
        for v in &self.vertices {
            if !self.prism.contains(v) {
                return fail(format!("{v} lies outside {}", self.prism));
            }
            if !seen.insert(v.lex_rank()) {
                return fail(format!("{v} visited twice"));
            }
        }
        for (s, &g) in self.steps.indices().iter().enumerate() {
            if !(1..=n - 3).contains(&g) && g != n - 1 {
                return fail(format!("step {s} uses b_{g}"));
            }
            if self.vertices[s].apply_gen(g)? != self.vertices[s + 1] {
                return fail(format!("step {s} is not a b_{g} edge"));
            }
        }
        if self.start().parity() == self.end().parity() {
            return fail("endpoints share a parity".into());
        }
        Ok(())
    }
}

/// Builds Hamiltonian paths in generalized prisms of `BS_n` from a fixed
/// Hamiltonian cycle of `BS_{n-2}`, checked once on construction.
#[derive(Debug, Clone)]
pub struct PrismPathBuilder {
    n: usize,
    base: Form,
}

impl PrismPathBuilder {
    pub fn new(n: usize, base: Form) -> Result<PrismPathBuilder> {
        crate::perm::check_n(n, 5, crate::perm::MAX_N)?;
        let report = validate_gray_code(n - 2, &base, true);
        if !report.ok {
            return Err(Error::BadBase(format!(
                "not a Hamiltonian cycle of BS_{}: {:?}",
                n - 2,
                report.first_violation
            )));
        }
        Ok(PrismPathBuilder { n, base })
    }

    pub fn with_sjt(n: usize) -> Result<PrismPathBuilder> {
        crate::perm::check_n(n, 5, crate::perm::MAX_N)?;
        Self::new(n, sjt_cycle(n - 2)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// A Hamiltonian path of `prism` from `pi` to `tau`.
    ///
    /// Walking the base cycle from `pi` gives `v_0 = pi, v_1, …, v_{N-1}` in
    /// `pi`'s copy; the mirror vertices `v̄_s = v_s · b_{n-1}` form the same
    /// cycle in the other copy. The path interleaves the two according to
    /// where `tau` sits on them.
    pub fn build(&self, prism: PrismId, pi: &Permutation, tau: &Permutation) -> Result<PrismPath> {
        let n = self.n;
        for v in [pi, tau] {
            if prism.n() != n || !prism.contains(v) {
                return Err(Error::NotInPrism {
                    vertex: v.to_string(),
                    prism: prism.to_string(),
                });
            }
        }
        if pi.parity() == tau.parity() {
            return Err(Error::SameParity(pi.to_string(), tau.to_string()));
        }
        let big_n = self.base.len();
        let base = self.base.indices();
        let rung = n - 1;

        let mut copy1 = Vec::with_capacity(big_n);
        let mut v = pi.clone();
        for s in 0..big_n {
            copy1.push(v.clone());
            v.swap_gen(base[s]);
        }
        let copy2: Vec<Permutation> = copy1.iter().map(|v| v.apply_gen(rung).unwrap()).collect();

        // (in second copy, index along the base cycle)
        let mut order: Vec<(bool, usize)> = Vec::with_capacity(2 * big_n);
        if let Some(t) = copy1.iter().position(|v| v == tau) {
            if t % 2 == 0 {
                return Err(Error::Internal(format!(
                    "same-copy endpoint at even offset {t}"
                )));
            }
            for s in 0..t {
                if s % 2 == 0 {
                    order.extend([(false, s), (true, s)]);
                } else {
                    order.extend([(true, s), (false, s)]);
                }
            }
            order.extend((t..big_n).map(|s| (true, s)));
            order.extend((t..big_n).rev().map(|s| (false, s)));
        } else {
            let t = copy2
                .iter()
                .position(|v| v == tau)
                .ok_or_else(|| Error::Internal(format!("{tau} missing from both copies")))?;
            if t % 2 == 1 {
                return Err(Error::Internal(format!(
                    "cross-copy endpoint at odd offset {t}"
                )));
            }
            if t == 0 {
                order.extend((0..big_n).map(|s| (false, s)));
                order.extend((0..big_n).rev().map(|s| (true, s)));
            } else {
                order.extend((0..t).map(|s| (false, s)));
                order.extend((0..t).rev().map(|s| (true, s)));
                for c in (t..big_n).rev() {
                    if (big_n - 1 - c) % 2 == 0 {
                        order.extend([(true, c), (false, c)]);
                    } else {
                        order.extend([(false, c), (true, c)]);
                    }
                }
            }
        }

        let mut steps = Vec::with_capacity(order.len().saturating_sub(1));
        for w in order.windows(2) {
            let ((c0, s0), (c1, s1)) = (w[0], w[1]);
            let g = if c0 != c1 && s0 == s1 {
                rung
            } else if c0 == c1 && (s0 + 1) % big_n == s1 {
                base[s0]
            } else if c0 == c1 && (s1 + 1) % big_n == s0 {
                base[s1]
            } else {
                return Err(Error::Internal(format!(
                    "non-adjacent schedule entries {w:?}"
                )));
            };
            steps.push(g);
        }
        let vertices = order
            .into_iter()
            .map(|(second, s)| {
                if second {
                    copy2[s].clone()
                } else {
                    copy1[s].clone()
                }
            })
            .collect();
        Ok(PrismPath {
            prism,
            vertices,
            steps: Form::raw(steps),
        })
    }
}

/// Convenience wrapper building a single path with an explicit base cycle.
pub fn ham_path_in_prism(
    prism: PrismId,
    pi: &Permutation,
    tau: &Permutation,
    base: &Form,
) -> Result<PrismPath> {
    PrismPathBuilder::new(prism.n(), base.clone())?.build(prism, pi, tau)
}

#[derive(Debug, Deserialize)]
struct Table1Fixture {
    rows: Vec<Table1RawRow>,
}

#[derive(Debug, Deserialize)]
struct Table1RawRow {
    target: Vec<String>,
    paths: Vec<Vec<String>>,
}

const TABLE1_JSON: &str = include_str!("../fixtures/table1.json");

/// One listed Hamiltonian path of `P_6(i, k)` with concrete indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Entry {
    pub row: usize,
    /// Word taking the source `π` to the row's end vertex.
    pub target: Form,
    pub path: Form,
}

fn resolve_symbol(sym: &str, i: usize, k: usize) -> Result<usize> {
    match sym {
        "k-1" => Ok(k - 1),
        "k" => Ok(k),
        "i" => Ok(i),
        other => Err(Error::Internal(format!("unknown fixture symbol {other:?}"))),
    }
}

/// The 38 tabulated Hamiltonian paths of the 6-prism `P_6(i, k)`, grouped
/// into six rows by end vertex.
pub fn table1_paths(i: usize, k: usize, n: usize) -> Result<Vec<Table1Entry>> {
    p6_form(i, k, n)?;
    let fixture: Table1Fixture = serde_json::from_str(TABLE1_JSON)
        .map_err(|e| Error::Internal(format!("table fixture: {e}")))?;
    let resolve = |syms: &[String]| -> Result<Form> {
        Ok(Form::raw(
            syms.iter()
                .map(|s| resolve_symbol(s, i, k))
                .collect::<Result<_>>()?,
        ))
    };
    let mut out = Vec::new();
    for (row, raw) in fixture.rows.iter().enumerate() {
        let target = resolve(&raw.target)?;
        for path in &raw.paths {
            out.push(Table1Entry {
                row,
                target: target.clone(),
                path: resolve(path)?,
            });
        }
    }
    Ok(out)
}

/// Checks one entry from `start`: 11 steps over `{b_{k-1}, b_k, b_i}`
/// visiting 12 distinct vertices and ending at `start · target`.
pub fn check_table1_entry(
    start: &Permutation,
    entry: &Table1Entry,
    i: usize,
    k: usize,
) -> Result<()> {
    let fail = |msg: String| Err(Error::InvalidPath(msg));
    if entry.path.len() != 11 {
        return fail(format!("{} steps instead of 11", entry.path.len()));
    }
    if let Some(g) = entry
        .path
        .indices()
        .iter()
        .find(|&&g| g != i && g != k && g != k - 1)
    {
        return fail(format!("b_{g} is not a prism generator"));
    }
    let walk = entry.path.trace(start)?;
    let distinct: HashSet<&Permutation> = walk.iter().collect();
    if distinct.len() != 12 {
        return fail(format!(
            "{} distinct vertices instead of 12",
            distinct.len()
        ));
    }
    let goal = start.apply_form(&entry.target)?;
    if walk[11] != goal {
        return fail(format!("ends at {} instead of {goal}", walk[11]));
    }
    Ok(())
}

/// Brute-force Hamilton-connectivity of the prism graph `C_m × K_2`.
pub fn prism_hamilton_connected(m: usize) -> Result<bool> {
    if !(3..=8).contains(&m) {
        return Err(Error::SizeOutOfRange {
            n: m,
            min: 3,
            max: 8,
        });
    }
    let order = 2 * m;
    let adj: Vec<Vec<usize>> = (0..order)
        .map(|v| {
            let (layer, pos) = (v / m, v % m);
            vec![
                layer * m + (pos + 1) % m,
                layer * m + (pos + m - 1) % m,
                (1 - layer) * m + pos,
            ]
        })
        .collect();
    for s in 0..order {
        for t in s + 1..order {
            if !ham_path_exists(&adj, s, t, 1u32 << s, 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn ham_path_exists(adj: &[Vec<usize>], cur: usize, target: usize, used: u32, count: usize) -> bool {
    if count == adj.len() {
        return cur == target;
    }
    for &next in &adj[cur] {
        if used & (1 << next) != 0 || (next == target && count + 1 != adj.len()) {
            continue;
        }
        if ham_path_exists(adj, next, target, used | (1 << next), count + 1) {
            return true;
        }
    }
    false
}
