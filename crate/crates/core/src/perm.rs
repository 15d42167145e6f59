//! Permutations of `{1..n}` acted on from the right by the bubble-sort
//! transpositions `b_1..b_{n-1}`.
//!
//! All public interfaces are 1-indexed: `b_i` swaps positions `i` and `i + 1`,
//! and the image of a permutation holds the values `1..=n`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` for which a permutation can be built; `20!` is the last
/// factorial that fits in a `u64` rank.
pub const MAX_N: usize = 20;

/// Default upper bound on `n` for operations that allocate `Θ(n!)` state.
pub const DEFAULT_N_CAP: usize = 10;

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub(crate) fn check_n(n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        return Err(Error::SizeOutOfRange { n, min, max });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A vertex of `BS_n`: the image `[π_1 π_2 … π_n]` of a permutation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n, 2, MAX_N)?;
        Ok(Permutation {
            image: (1..=n as u8).collect(),
        })
    }

    /// Builds a permutation from its 1-based image, rejecting anything that
    /// is not a bijection on `{1..n}`.
    pub fn from_image(image: &[usize]) -> Result<Self> {
        let n = image.len();
        check_n(n, 2, MAX_N)?;
        let mut seen = vec![false; n + 1];
        for &v in image {
            if v == 0 || v > n || seen[v] {
                return Err(Error::NotAPermutation(image.to_vec()));
            }
            seen[v] = true;
        }
        Ok(Permutation {
            image: image.iter().map(|&v| v as u8).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// `π_pos` for a 1-based position.
    pub fn at(&self, pos: usize) -> usize {
        self.image[pos - 1] as usize
    }

    pub fn image(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v as usize).collect()
    }

    pub fn check_gen(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.n() {
            return Err(Error::GeneratorOutOfRange {
                index: i,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// `π · b_i`.
    pub fn apply_gen(&self, i: usize) -> Result<Permutation> {
        self.check_gen(i)?;
        let mut next = self.clone();
        next.image.swap(i - 1, i);
        Ok(next)
    }

    /// In-place `π · b_i`; the caller guarantees `1 ≤ i ≤ n-1`.
    pub(crate) fn swap_gen(&mut self, i: usize) {
        self.image.swap(i - 1, i);
    }

    /// Left-to-right fold of [`Permutation::apply_gen`] over the form.
    pub fn apply_form(&self, form: &Form) -> Result<Permutation> {
        let mut p = self.clone();
        for &i in form.indices() {
            p.check_gen(i)?;
            p.swap_gen(i);
        }
        Ok(p)
    }

    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for a in 0..self.image.len() {
            for b in a + 1..self.image.len() {
                if self.image[a] > self.image[b] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn parity(&self) -> Parity {
        if self.inversions() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0u8; self.n()];
        for (pos, &v) in self.image.iter().enumerate() {
            image[v as usize - 1] = pos as u8 + 1;
        }
        Permutation { image }
    }

    /// Position of this permutation in lexicographic order of images.
    pub fn lex_rank(&self) -> u64 {
        let n = self.n();
        let mut rank = 0u64;
        for a in 0..n {
            let smaller_after = self.image[a + 1..]
                .iter()
                .filter(|&&v| v < self.image[a])
                .count() as u64;
            rank += smaller_after * factorial(n - 1 - a);
        }
        rank
    }

    pub fn lex_unrank(n: usize, rank: u64) -> Result<Permutation> {
        check_n(n, 2, MAX_N)?;
        let total = factorial(n);
        if rank >= total {
            return Err(Error::RankOutOfRange { rank, n });
        }
        let mut pool: Vec<u8> = (1..=n as u8).collect();
        let mut rest = rank;
        let mut image = Vec::with_capacity(n);
        for a in 0..n {
            let f = factorial(n - 1 - a);
            let digit = (rest / f) as usize;
            rest %= f;
            image.push(pool.remove(digit));
        }
        Ok(Permutation { image })
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = Permutation>> {
        check_n(n, 2, MAX_N)?;
        Ok((0..factorial(n)).map(move |r| Permutation::lex_unrank(n, r).unwrap()))
    }

    /// Image written as concatenated digits for `n ≤ 9`, space-separated otherwise.
    pub fn label(&self) -> String {
        if self.n() <= 9 {
            self.image.iter().map(|v| char::from(b'0' + v)).collect()
        } else {
            self.image
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.image)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// A sequence of generator indices read as a walk `π b_{i_0} b_{i_1} …`.
///
/// Forms built with [`Form::cyclic`] or [`Form::open`] satisfy the reduced
/// word rule (no index repeated back to back, and for cyclic forms also
/// first ≠ last). [`Form::raw`] skips the rule so that arbitrary walk
/// descriptors can be handed to validators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Form {
    indices: Vec<usize>,
}

impl Form {
    pub fn raw(indices: Vec<usize>) -> Form {
        Form { indices }
    }

    pub fn open(indices: Vec<usize>, n: usize) -> Result<Form> {
        Self::checked(indices, n, false)
    }

    pub fn cyclic(indices: Vec<usize>, n: usize) -> Result<Form> {
        Self::checked(indices, n, true)
    }

    fn checked(indices: Vec<usize>, n: usize, cyclic: bool) -> Result<Form> {
        if indices.is_empty() {
            return Err(Error::MalformedForm("empty form".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i >= n) {
            return Err(Error::GeneratorOutOfRange { index: bad, n });
        }
        if let Some(pos) = indices.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::MalformedForm(format!(
                "index {} repeated at positions {} and {}",
                indices[pos],
                pos,
                pos + 1
            )));
        }
        if cyclic && indices.len() > 1 && indices[0] == indices[indices.len() - 1] {
            return Err(Error::MalformedForm(
                "first and last index coincide in a cyclic form".into(),
            ));
        }
        Ok(Form { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The form started `shift` steps later (cyclic reading).
    pub fn rotated(&self, shift: usize) -> Form {
        let mut indices = self.indices.clone();
        if !indices.is_empty() {
            let len = indices.len();
            indices.rotate_left(shift % len);
        }
        Form { indices }
    }

    /// The same closed walk traversed in the opposite direction.
    pub fn reversed(&self) -> Form {
        Form {
            indices: self.indices.iter().rev().copied().collect(),
        }
    }

    /// Vertices visited from `start`, including `start` and the final vertex.
    pub fn trace(&self, start: &Permutation) -> Result<Vec<Permutation>> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut p = start.clone();
        out.push(p.clone());
        for &i in &self.indices {
            p.check_gen(i)?;
            p.swap_gen(i);
            out.push(p.clone());
        }
        Ok(out)
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form{:?}", self.indices)
    }
}

impl Serialize for Form {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(s)
    }
}

impl From<Form> for Vec<usize> {
    fn from(f: Form) -> Self {
        f.indices
    }
}

/// Open Steinhaus–Johnson–Trotter swap sequence: `n! - 1` adjacent swaps
/// visiting every permutation once, starting from the identity.
fn sjt_open(n: usize) -> Vec<usize> {
    if n <= 1 {
        return Vec::new();
    }
    let inner = sjt_open(n - 1);
    let blocks = inner.len() + 1;
    let mut out = Vec::with_capacity(factorial(n) as usize - 1);
    for block in 0..blocks {
        // The largest element sweeps right-to-left on even blocks and back on odd ones.
        if block % 2 == 0 {
            out.extend((1..n).rev());
        } else {
            out.extend(1..n);
        }
        if block < inner.len() {
            // With the largest element parked at the far left, the smaller
            // elements sit one position to the right.
            out.push(inner[block] + usize::from(block % 2 == 0));
        }
    }
    out
}

/// The SJT Gray code closed into a Hamiltonian cycle of `BS_n`.
///
/// For `n = 2` the result is `[1, 1]`: `BS_2` is a single edge, so the
/// closed walk must cross it twice and the reduced word rule is waived.
pub fn sjt_cycle(n: usize) -> Result<Form> {
    check_n(n, 2, MAX_N)?;
    let mut indices = sjt_open(n);
    let start = Permutation::identity(n)?;
    let last = start.apply_form(&Form::raw(indices.clone()))?;
    let closing = (1..n)
        .find(|&i| last.apply_gen(i).map(|q| q == start).unwrap_or(false))
        .ok_or_else(|| Error::Internal("SJT sequence does not close".into()))?;
    indices.push(closing);
    Ok(Form::raw(indices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_image(v).unwrap()
    }

    #[test]
    fn identity_images() {
        assert_eq!(Permutation::identity(3).unwrap().image(), vec![1, 2, 3]);
        assert_eq!(
            Permutation::identity(5).unwrap().image(),
            vec![1, 2, 3, 4, 5]
        );
        assert!(Permutation::identity(1).is_err());
    }

    #[test]
    fn from_image_rejects_non_bijections() {
        assert!(Permutation::from_image(&[1, 1, 3]).is_err());
        assert!(Permutation::from_image(&[1, 4, 3]).is_err());
        assert!(Permutation::from_image(&[0, 1]).is_err());
    }

    #[test]
    fn apply_gen_swaps_adjacent_positions() {
        assert_eq!(
            perm(&[1, 2, 3, 4]).apply_gen(2).unwrap(),
            perm(&[1, 3, 2, 4])
        );
        assert_eq!(perm(&[2, 1, 3]).apply_gen(1).unwrap(), perm(&[1, 2, 3]));
        assert!(perm(&[1, 2, 3]).apply_gen(3).is_err());
        assert!(perm(&[1, 2, 3]).apply_gen(0).is_err());
    }

    #[test]
    fn apply_form_closes_known_cycles() {
        let id3 = Permutation::identity(3).unwrap();
        let c6 = Form::cyclic(vec![2, 1, 2, 1, 2, 1], 3).unwrap();
        assert_eq!(id3.apply_form(&c6).unwrap(), id3);
        let id4 = Permutation::identity(4).unwrap();
        let c4 = Form::cyclic(vec![3, 1, 3, 1], 4).unwrap();
        assert_eq!(id4.apply_form(&c4).unwrap(), id4);
        assert_eq!(id4.apply_form(&Form::default()).unwrap(), id4);
        assert!(id3.apply_form(&Form::raw(vec![1, 3])).is_err());
    }

    #[test]
    fn form_constructors_enforce_reduced_words() {
        assert!(Form::open(vec![1, 1], 3).is_err());
        assert!(Form::cyclic(vec![1, 2, 1], 3).is_err());
        assert!(Form::open(vec![1, 2, 1], 3).is_ok());
        assert!(Form::open(vec![1, 3], 3).is_err());
        assert!(Form::open(vec![], 3).is_err());
    }

    #[test]
    fn parity_basics() {
        assert_eq!(Permutation::identity(6).unwrap().parity(), Parity::Even);
        assert_eq!(perm(&[2, 1, 3, 4]).parity(), Parity::Odd);
    }

    #[test]
    fn parity_flips_exhaustively_up_to_five() {
        for n in 2..=5 {
            for p in Permutation::all(n).unwrap() {
                for i in 1..n {
                    assert_ne!(p.apply_gen(i).unwrap().parity(), p.parity());
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Permutation::lex_unrank(3, 0).unwrap(), perm(&[1, 2, 3]));
        assert_eq!(perm(&[3, 2, 1]).lex_rank(), 5);
        assert_eq!(Permutation::lex_unrank(4, 17).unwrap().lex_rank(), 17);
        assert!(Permutation::lex_unrank(3, 6).is_err());
    }

    #[test]
    fn rank_round_trip_exhaustive() {
        for n in 2..=6 {
            let mut prev: Option<Permutation> = None;
            for r in 0..factorial(n) {
                let p = Permutation::lex_unrank(n, r).unwrap();
                assert_eq!(p.lex_rank(), r);
                if let Some(q) = prev {
                    assert!(q < p, "unrank must follow lexicographic order");
                }
                prev = Some(p);
            }
        }
    }

    #[test]
    fn sjt_small_cases() {
        assert_eq!(sjt_cycle(3).unwrap().indices(), &[2, 1, 2, 1, 2, 1]);
        assert_eq!(sjt_cycle(2).unwrap().indices(), &[1, 1]);
        assert_eq!(sjt_cycle(4).unwrap().len(), 24);
        assert!(sjt_cycle(1).is_err());
    }

    #[test]
    fn rotation_and_reversal() {
        let f = Form::raw(vec![1, 2, 3, 4]);
        assert_eq!(f.rotated(1).indices(), &[2, 3, 4, 1]);
        assert_eq!(f.rotated(5).indices(), &[2, 3, 4, 1]);
        assert_eq!(f.reversed().indices(), &[4, 3, 2, 1]);
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (2..=max_n)
            .prop_flat_map(|n| (Just(n), 0..factorial(n)))
            .prop_map(|(n, r)| Permutation::lex_unrank(n, r).unwrap())
    }

    proptest! {
        #[test]
        fn apply_gen_is_an_involution(p in arb_perm(9), seed in 0usize..100) {
            let i = 1 + seed % (p.n() - 1);
            prop_assert_eq!(p.apply_gen(i).unwrap().apply_gen(i).unwrap(), p);
        }

        #[test]
        fn inverse_composes_to_identity(p in arb_perm(9)) {
            let inv = p.inverse();
            for pos in 1..=p.n() {
                prop_assert_eq!(inv.at(p.at(pos)), pos);
            }
        }

        #[test]
        fn rank_round_trip_large(p in arb_perm(MAX_N)) {
            prop_assert_eq!(Permutation::lex_unrank(p.n(), p.lex_rank()).unwrap(), p);
        }
    }
}
