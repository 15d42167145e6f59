//! Canonical-form families of 4- and 6-cycles, their instantiation at a
//! vertex, closed-form counts, and certification against the exhaustive
//! oracle in [`crate::graph`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{enumerate_cycles_through, Cycle};
use crate::perm::{factorial, Form, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    C4,
    #[serde(rename = "C6_1")]
    C6_1,
    #[serde(rename = "C6_2")]
    C6_2,
    #[serde(rename = "C6_3")]
    C6_3,
    #[serde(rename = "C6_4")]
    C6_4,
    #[serde(rename = "C6_5")]
    C6_5,
    #[serde(rename = "C6_6")]
    C6_6,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::C4,
        Family::C6_1,
        Family::C6_2,
        Family::C6_3,
        Family::C6_4,
        Family::C6_5,
        Family::C6_6,
    ];

    pub fn cycle_len(self) -> usize {
        match self {
            Family::C4 => 4,
            _ => 6,
        }
    }

    /// Smallest `n` at which the family has members.
    pub fn min_n(self) -> usize {
        match self {
            Family::C4 => 4,
            Family::C6_1 => 3,
            Family::C6_2 => 5,
            _ => 6,
        }
    }

    fn arity(self) -> usize {
        match self {
            Family::C6_1 => 1,
            Family::C4 | Family::C6_2 => 2,
            _ => 3,
        }
    }

    pub fn of_len(len: usize) -> impl Iterator<Item = Family> {
        Family::ALL
            .into_iter()
            .filter(move |f| f.cycle_len() == len)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::C4 => "C4",
            Family::C6_1 => "C6_1",
            Family::C6_2 => "C6_2",
            Family::C6_3 => "C6_3",
            Family::C6_4 => "C6_4",
            Family::C6_5 => "C6_5",
            Family::C6_6 => "C6_6",
        };
        f.write_str(s)
    }
}

/// `b_a` and `b_b` commute exactly when `|a - b| ≥ 2`.
fn independent(a: usize, b: usize) -> bool {
    a.abs_diff(b) >= 2
}

/// One member of a family: the family tag plus its index tuple
/// `(i)`, `(i, j)` or `(i, j, k)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FormFamily {
    pub family: Family,
    pub params: Vec<usize>,
    pub n: usize,
}

impl FormFamily {
    pub fn new(family: Family, params: Vec<usize>, n: usize) -> Result<FormFamily> {
        if params.len() != family.arity() {
            return Err(Error::InvalidParams(format!(
                "{family} takes {} parameters, got {:?}",
                family.arity(),
                params
            )));
        }
        let ok = match (family, params.as_slice()) {
            (Family::C4, &[i, j]) => 1 <= i && i + 1 < j && j < n,
            (Family::C6_1, &[i]) => 1 <= i && i + 2 <= n,
            // b_j independent of both b_i and b_{i+1}.
            (Family::C6_2, &[i, j]) => {
                1 <= i
                    && i + 2 <= n
                    && 1 <= j
                    && j < n
                    && independent(j, i)
                    && independent(j, i + 1)
            }
            (_, &[i, j, k]) => 1 <= i && i + 1 < j && j + 1 < k && k < n,
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidParams(format!(
                "{family}{params:?} violates the family constraint for n = {n}"
            )));
        }
        Ok(FormFamily { family, params, n })
    }

    /// The literal index sequence with the parameters substituted.
    pub fn expand(&self) -> Form {
        let p = &self.params;
        let indices = match self.family {
            Family::C4 => vec![p[1], p[0], p[1], p[0]],
            Family::C6_1 => [p[0], p[0] + 1].repeat(3),
            Family::C6_2 => {
                let (i, j) = (p[0], p[1]);
                vec![j, i + 1, i, j, i, i + 1]
            }
            Family::C6_3 => {
                let (i, j, k) = (p[0], p[1], p[2]);
                vec![k, j, i, k, j, i]
            }
            Family::C6_4 => {
                let (i, j, k) = (p[0], p[1], p[2]);
                vec![k, j, i, k, i, j]
            }
            Family::C6_5 => {
                let (i, j, k) = (p[0], p[1], p[2]);
                vec![k, j, k, i, j, i]
            }
            Family::C6_6 => {
                let (i, j, k) = (p[0], p[1], p[2]);
                vec![k, i, k, j, i, j]
            }
        };
        Form::raw(indices)
    }
}

/// All parameter tuples of a family for `BS_n`, in lexicographic order.
/// Empty below the family's minimum `n`.
pub fn enumerate_family_params(family: Family, n: usize) -> Vec<FormFamily> {
    let mut out = Vec::new();
    if n < family.min_n() {
        return out;
    }
    match family.arity() {
        1 => {
            for i in 1..n {
                out.extend(FormFamily::new(family, vec![i], n));
            }
        }
        2 => {
            for i in 1..n {
                for j in 1..n {
                    out.extend(FormFamily::new(family, vec![i, j], n));
                }
            }
        }
        _ => {
            for i in 1..n {
                for j in i + 2..n {
                    for k in j + 2..n {
                        out.extend(FormFamily::new(family, vec![i, j, k], n));
                    }
                }
            }
        }
    }
    out
}

/// Closed-form number of parameter tuples (forms) in a family.
pub fn family_form_count(family: Family, n: usize) -> u64 {
    if n < family.min_n() {
        return 0;
    }
    let n = n as u64;
    match family {
        Family::C4 => (n - 2) * (n - 3) / 2,
        Family::C6_1 => n - 2,
        Family::C6_2 => (n - 3) * (n - 4),
        _ => (n - 3) * (n - 4) * (n - 5) / 6,
    }
}

/// Number of three-index forms per family via the recurrence
/// `N(6) = 1`, `N(n) = N(n-1) + (n-4)(n-5)/2`.
///
/// The new triples at `n` are those with `k = n - 1`, i.e. a pair `i < j - 1`
/// with `j ≤ n - 3`, of which there are `C(n-4, 2)`.
pub fn three_index_forms_by_recurrence(n: usize) -> u64 {
    if n < 6 {
        return 0;
    }
    let mut count = 1u64;
    for m in 7..=n as u64 {
        count += (m - 4) * (m - 5) / 2;
    }
    count
}

/// Instantiates every family form of length `len` at `p`, from every
/// rotation and direction, grouped by family.
pub fn cycles_through_vertex_by_family(
    p: &Permutation,
    len: usize,
) -> Result<BTreeMap<Family, BTreeSet<Cycle>>> {
    if len != 4 && len != 6 {
        return Err(Error::UnsupportedLength(len));
    }
    let n = p.n();
    let mut out = BTreeMap::new();
    for family in Family::of_len(len) {
        let mut cycles = BTreeSet::new();
        for ff in enumerate_family_params(family, n) {
            let form = ff.expand();
            for shift in 0..len {
                let rot = form.rotated(shift);
                for reading in [rot.reversed(), rot] {
                    let walk = reading.trace(p)?;
                    if walk[len] != *p {
                        return Err(Error::Internal(format!("{ff:?} does not close")));
                    }
                    cycles.insert(Cycle::from_vertices(n, &walk[..len]));
                }
            }
        }
        out.insert(family, cycles);
    }
    Ok(out)
}

pub fn cycles_through_vertex(p: &Permutation, len: usize) -> Result<BTreeSet<Cycle>> {
    Ok(cycles_through_vertex_by_family(p, len)?
        .into_values()
        .flatten()
        .collect())
}

pub(crate) fn serialize_big<S: Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(small) => s.serialize_u64(small),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

fn serialize_big_map<S: Serializer>(
    m: &BTreeMap<Family, BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        match u64::try_from(v) {
            Ok(small) => map.serialize_entry(k, &small)?,
            Err(_) => map.serialize_entry(k, &v.to_string())?,
        }
    }
    map.end()
}

/// Per-vertex and whole-graph 4-/6-cycle counts from the published closed
/// forms, not from enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    pub n: usize,
    #[serde(serialize_with = "serialize_big_map")]
    pub per_vertex: BTreeMap<Family, BigUint>,
    #[serde(serialize_with = "serialize_big")]
    pub per_vertex_total_c4: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub per_vertex_total_c6: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub total_c4: BigUint,
    #[serde(serialize_with = "serialize_big")]
    pub total_c6: BigUint,
}

fn big_factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

/// Closed-form census. Counts below a family's minimum `n` are zero.
pub fn census(n: usize) -> CycleCensus {
    let big = |v: u64| BigUint::from(v);
    let m = n as u64;
    let mut per_vertex = BTreeMap::new();
    for family in Family::ALL {
        let count = if n < family.min_n() {
            0
        } else {
            match family {
                Family::C4 => (m - 2) * (m - 3) / 2,
                Family::C6_1 => m - 2,
                Family::C6_2 => 6 * (m - 3) * (m - 4),
                Family::C6_3 => (m - 3) * (m - 4) * (m - 5) / 2,
                _ => (m - 3) * (m - 4) * (m - 5),
            }
        };
        per_vertex.insert(family, big(count));
    }
    let per_vertex_total_c4 = per_vertex[&Family::C4].clone();
    let per_vertex_total_c6: BigUint = Family::of_len(6).map(|f| per_vertex[&f].clone()).sum();

    let fact = big_factorial(n);
    let total_c4 = if n >= 4 {
        big((m - 2) * (m - 3)) * &fact / big(8)
    } else {
        big(0)
    };
    let total_c6 = if n >= 3 {
        // 7n³ − 72n² + 247n − 280 is positive for every n ≥ 3.
        let poly = 7 * m * m * m + 247 * m - 72 * m * m - 280;
        big(poly) * &fact / big(12)
    } else {
        big(0)
    };
    CycleCensus {
        n,
        per_vertex,
        per_vertex_total_c4,
        per_vertex_total_c6,
        total_c4,
        total_c6,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleScope {
    /// Every vertex of `BS_n`.
    Full,
    /// A seeded uniform sample of this many distinct vertices.
    Sample(usize),
}

impl OracleScope {
    /// Whole graph up to `n = 6`, a single vertex beyond.
    pub fn default_for(n: usize) -> OracleScope {
        if n <= 6 {
            OracleScope::Full
        } else {
            OracleScope::Sample(1)
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OracleScope::Full => "full",
            OracleScope::Sample(_) => "sampled",
        }
    }
}

impl Serialize for OracleScope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCounts {
    pub c4: u64,
    pub c6: u64,
    pub families: BTreeMap<Family, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub c4: u64,
    pub c6: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub n: usize,
    pub oracle_scope: OracleScope,
    pub seed: u64,
    pub vertices_checked: usize,
    /// Counts measured at the first checked vertex.
    pub per_vertex_observed: VertexCounts,
    /// Every checked vertex produced the same counts.
    pub vertex_transitive: bool,
    /// Family instantiation and the oracle agree as sets at every checked vertex.
    pub sets_equal: bool,
    /// Whole-graph oracle totals, full scope only.
    pub oracle_totals: Option<Totals>,
    pub census: CycleCensus,
    /// Observed counts agree with the closed-form census.
    pub census_equal: bool,
    pub discrepancies: Vec<String>,
    pub certified: bool,
}

struct VertexCheck {
    counts: VertexCounts,
    oracle: [BTreeSet<Cycle>; 2],
    mismatch: Option<String>,
}

fn check_vertex(p: &Permutation) -> Result<VertexCheck> {
    let mut families = BTreeMap::new();
    let mut oracle: [BTreeSet<Cycle>; 2] = Default::default();
    let mut mismatch = Vec::new();
    let mut totals = [0u64; 2];
    for (slot, len) in [4usize, 6].into_iter().enumerate() {
        let by_family = cycles_through_vertex_by_family(p, len)?;
        let mut built = BTreeSet::new();
        for (family, cycles) in by_family {
            families.insert(family, cycles.len() as u64);
            built.extend(cycles);
        }
        let found = if p.n() >= 3 {
            enumerate_cycles_through(p, len)?
        } else {
            BTreeSet::new()
        };
        if built != found {
            mismatch.push(format!(
                "{len}-cycles at {p}: families give {}, oracle gives {}",
                built.len(),
                found.len()
            ));
        }
        totals[slot] = found.len() as u64;
        oracle[slot] = found;
    }
    Ok(VertexCheck {
        counts: VertexCounts {
            c4: totals[0],
            c6: totals[1],
            families,
        },
        oracle,
        mismatch: (!mismatch.is_empty()).then(|| mismatch.join("; ")),
    })
}

/// Compares family instantiation with the exhaustive oracle vertex by vertex,
/// and both with the closed-form census.
pub fn certify(n: usize, scope: OracleScope, seed: u64) -> Result<CertifyReport> {
    crate::perm::check_n(n, 2, crate::perm::DEFAULT_N_CAP)?;
    let order = factorial(n);
    let ranks: Vec<u64> = match scope {
        OracleScope::Full => (0..order).collect(),
        OracleScope::Sample(count) => {
            if count == 0 {
                return Err(Error::InvalidParams(
                    "sample count must be at least 1".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<u64> = sample(&mut rng, order as usize, count.min(order as usize))
                .into_iter()
                .map(|r| r as u64)
                .collect();
            picked.sort_unstable();
            picked
        }
    };

    let checks: Vec<VertexCheck> = ranks
        .par_iter()
        .map(|&r| check_vertex(&Permutation::lex_unrank(n, r)?))
        .collect::<Result<_>>()?;

    let census = census(n);
    let mut discrepancies: Vec<String> = checks.iter().filter_map(|c| c.mismatch.clone()).collect();
    let sets_equal = discrepancies.is_empty();
    let first = checks[0].counts.clone();
    let vertex_transitive = checks.iter().all(|c| c.counts == first);
    if !vertex_transitive {
        discrepancies.push("per-vertex counts differ between vertices".into());
    }

    let mut census_equal = true;
    let mut compare = |what: String, observed: u64, expected: &BigUint| {
        if BigUint::from(observed) != *expected {
            census_equal = false;
            discrepancies.push(format!(
                "{what}: observed {observed}, closed form {expected}"
            ));
        }
    };
    for (family, expected) in &census.per_vertex {
        compare(
            format!("per-vertex {family}"),
            first.families[family],
            expected,
        );
    }
    compare(
        "per-vertex 4-cycles".into(),
        first.c4,
        &census.per_vertex_total_c4,
    );
    compare(
        "per-vertex 6-cycles".into(),
        first.c6,
        &census.per_vertex_total_c6,
    );

    let oracle_totals = if scope == OracleScope::Full {
        let mut all4 = BTreeSet::new();
        let mut all6 = BTreeSet::new();
        for c in &checks {
            all4.extend(c.oracle[0].iter().cloned());
            all6.extend(c.oracle[1].iter().cloned());
        }
        let totals = Totals {
            c4: all4.len() as u64,
            c6: all6.len() as u64,
        };
        compare("total 4-cycles".into(), totals.c4, &census.total_c4);
        compare("total 6-cycles".into(), totals.c6, &census.total_c6);
        Some(totals)
    } else {
        None
    };

    Ok(CertifyReport {
        n,
        oracle_scope: scope,
        seed,
        vertices_checked: checks.len(),
        per_vertex_observed: first,
        vertex_transitive,
        sets_equal,
        oracle_totals,
        certified: sets_equal && vertex_transitive && census_equal,
        census,
        census_equal,
        discrepancies,
    })
}
