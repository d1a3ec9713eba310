//! Witness-time search over (1/lp)Z via admissible-numerator bit sets.
//!
//! For a speed v, the admissible set holds one bit per numerator a in
//! [0, lp); bit a is set when the time a/lp keeps the runner with speed v
//! at distance >= 1/(k+1) from the origin. A tuple has a witness in
//! (1/lp)Z exactly when the intersection of its coordinates' admissible
//! sets is nonempty. Sets are cached per residue and intersected with
//! word-wide ANDs; the intersection stops at the first empty prefix.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::arith::gcd;
use crate::error::Result;
use crate::params::{gcd_condition_index, AnsatzParams, SpeedTuple};

/// Bit-vector over numerators [0, lp).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeratorSet {
    len: u64,
    words: Vec<u64>,
}

impl NumeratorSet {
    pub fn empty(len: u64) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64) as usize],
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn set(&mut self, a: u64) {
        debug_assert!(a < self.len);
        self.words[(a / 64) as usize] |= 1u64 << (a % 64);
    }

    pub fn get(&self, a: u64) -> bool {
        debug_assert!(a < self.len);
        self.words[(a / 64) as usize] & (1u64 << (a % 64)) != 0
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Intersect in place; returns true when the result is still nonempty.
    pub fn and_assign(&mut self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut any = 0u64;
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
            any |= *w;
        }
        any != 0
    }

    pub fn copy_from(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        self.words.copy_from_slice(&other.words);
    }

    /// Smallest set numerator, if any.
    pub fn first_set(&self) -> Option<u64> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i as u64 * 64 + u64::from(w.trailing_zeros()));
            }
        }
        None
    }

    pub fn iter_set(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = i as u64 * 64;
            BitIter { word: w, base }
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

struct BitIter {
    word: u64,
    base: u64,
}

impl Iterator for BitIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.word == 0 {
            return None;
        }
        let tz = u64::from(self.word.trailing_zeros());
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}

/// Admissible numerators for speed v: bit a set iff norm_ok(a, v).
///
/// Built by walking m = (a*v) mod lp incrementally and testing the residue
/// band, so construction is O(lp) regardless of gcd(v, lp).
pub fn admissible_set(v: u64, params: &AnsatzParams) -> NumeratorSet {
    let lp = params.lp();
    let (lo, hi) = params.band();
    let mut set = NumeratorSet::empty(lp);
    let mut m = 0u64;
    for a in 0..lp {
        if lo <= m && m <= hi {
            set.set(a);
        }
        m += v;
        if m >= lp {
            m -= lp;
        }
    }
    set
}

/// Read-only cache of admissible sets keyed by residue, built once per
/// (lp, k) context and shared across threads.
#[derive(Debug)]
pub struct AdmissibleCache {
    params: AnsatzParams,
    sets: HashMap<u64, NumeratorSet>,
}

impl AdmissibleCache {
    /// Build sets for exactly the given residues (in parallel).
    pub fn for_residues(params: AnsatzParams, residues: &BTreeSet<u64>) -> Self {
        let sets: HashMap<u64, NumeratorSet> = residues
            .par_iter()
            .map(|&v| (v, admissible_set(v, &params)))
            .collect();
        Self { params, sets }
    }

    pub fn params(&self) -> &AnsatzParams {
        &self.params
    }

    pub fn get(&self, v: u64) -> &NumeratorSet {
        self.sets
            .get(&v)
            .unwrap_or_else(|| panic!("admissible cache miss for residue {v}"))
    }

    pub fn contains(&self, v: u64) -> bool {
        self.sets.contains_key(&v)
    }
}

/// Outcome of a properness decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProperVerdict {
    /// gcd(l, all coordinates except the indexed one) > 1.
    ProperByGcd(usize),
    /// The smallest numerator a such that a/lp is a witness time.
    ProperByWitness(u64),
    Improper,
}

impl ProperVerdict {
    pub fn is_improper(&self) -> bool {
        matches!(self, ProperVerdict::Improper)
    }
}

/// Properness of a coordinate slice, using `cache` for the admissible sets.
/// `acc` is caller-provided scratch sized to lp. The gcd escape is checked
/// first; the witness reported is the smallest valid numerator.
pub fn is_proper_coords(
    coords: &[u64],
    cache: &AdmissibleCache,
    acc: &mut NumeratorSet,
) -> ProperVerdict {
    let params = cache.params();
    if let Some(i) = gcd_condition_index(coords, params.l()) {
        return ProperVerdict::ProperByGcd(i);
    }
    // Intersect in ascending coordinate order.
    let mut order: [u8; 64] = [0; 64];
    let k = coords.len();
    debug_assert!(k <= 64);
    for (i, slot) in order.iter_mut().take(k).enumerate() {
        *slot = i as u8;
    }
    order[..k].sort_unstable_by_key(|&i| coords[i as usize]);

    acc.copy_from(cache.get(coords[order[0] as usize]));
    for &i in &order[1..k] {
        if !acc.and_assign(cache.get(coords[i as usize])) {
            return ProperVerdict::Improper;
        }
    }
    match acc.first_set() {
        Some(a) => ProperVerdict::ProperByWitness(a),
        None => ProperVerdict::Improper,
    }
}

/// Properness of a validated tuple. Builds a one-off cache; loops should use
/// `is_proper_coords` against a shared cache instead.
pub fn is_proper(tuple: &SpeedTuple) -> ProperVerdict {
    let params = *tuple.params();
    let residues: BTreeSet<u64> = tuple.coords().iter().copied().collect();
    let cache = AdmissibleCache::for_residues(params, &residues);
    let mut acc = NumeratorSet::empty(params.lp());
    is_proper_coords(tuple.coords(), &cache, &mut acc)
}

// --- independent certificate audit path -------------------------------------
//
// witness_certificate_check re-derives the distance condition with reduced
// fractions and shares no code with the band arithmetic above.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Frac {
    num: u128,
    den: u128,
}

impl Frac {
    fn new(num: u128, den: u128) -> Self {
        debug_assert!(den > 0);
        let g = gcd_u128(num, den);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    /// Fractional part of a nonnegative rational.
    fn fract(self) -> Self {
        Self::new(self.num % self.den, self.den)
    }

    /// min(x, 1 - x) for x in [0, 1).
    fn distance_to_nearest_integer(self) -> Self {
        debug_assert!(self.num < self.den);
        let complement = Self::new(self.den - self.num, self.den);
        if self.num * complement.den <= complement.num * self.den {
            self
        } else {
            complement
        }
    }

    fn ge(self, other: Self) -> bool {
        self.num * other.den >= other.num * self.den
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Independent audit of a witness numerator: recomputes, with exact reduced
/// fractions, whether the time a/lp keeps every runner of `tuple` at distance
/// >= 1/(k+1).
pub fn witness_certificate_check(tuple: &SpeedTuple, a: u64) -> bool {
    let params = tuple.params();
    debug_assert!(a < params.lp());
    let threshold = Frac::new(1, u128::from(params.k()) + 1);
    tuple.coords().iter().all(|&v| {
        let position = Frac::new(u128::from(a) * u128::from(v), u128::from(params.lp())).fract();
        position.distance_to_nearest_integer().ge(threshold)
    })
}

/// Convenience: build a cache for a tuple set's residues.
pub fn cache_for_coords<'a>(
    params: AnsatzParams,
    coords: impl Iterator<Item = &'a u64>,
) -> AdmissibleCache {
    let residues: BTreeSet<u64> = coords.copied().collect();
    AdmissibleCache::for_residues(params, &residues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::AnsatzParams;

    fn params(k: u32, p: u64, l: u64) -> AnsatzParams {
        AnsatzParams::new(k, p, l).unwrap()
    }

    fn bits(set: &NumeratorSet) -> Vec<u64> {
        set.iter_set().collect()
    }

    #[test]
    fn admissible_examples() {
        let s = admissible_set(1, &params(3, 2, 2)); // lp = 4
        assert_eq!(bits(&s), vec![1, 2, 3]);
        let s = admissible_set(1, &params(3, 5, 1));
        assert_eq!(bits(&s), vec![2, 3]);
        let s = admissible_set(1, &params(10, 11, 1));
        assert_eq!(bits(&s), (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn admissible_matches_norm_ok() {
        for (k, p, l) in [(3u32, 5u64, 4u64), (4, 7, 3), (2, 13, 1)] {
            let prm = params(k, p, l);
            for v in 1..prm.lp() {
                let s = admissible_set(v, &prm);
                for a in 0..prm.lp() {
                    assert_eq!(s.get(a), prm.norm_ok(a, v), "k={k} p={p} l={l} v={v} a={a}");
                }
            }
        }
    }

    #[test]
    fn numerator_zero_never_admissible() {
        for (k, p, l) in [(3u32, 5u64, 1u64), (4, 11, 2), (6, 7, 7)] {
            let prm = params(k, p, l);
            for v in 1..prm.lp() {
                assert!(!admissible_set(v, &prm).get(0));
            }
        }
    }

    fn verdict(coords: &[u64], prm: AnsatzParams) -> ProperVerdict {
        is_proper(&SpeedTuple::new(coords.to_vec(), prm).unwrap())
    }

    #[test]
    fn verdict_examples() {
        assert_eq!(verdict(&[1, 2, 3], params(3, 5, 1)), ProperVerdict::Improper);
        assert_eq!(
            verdict(&[1, 2, 3], params(3, 5, 4)),
            ProperVerdict::ProperByWitness(5)
        );
        assert_eq!(
            verdict(&[3, 4, 8], params(3, 5, 2)),
            ProperVerdict::ProperByGcd(0)
        );
    }

    #[test]
    fn witness_check_examples() {
        let t = SpeedTuple::new(vec![1, 2, 3], params(3, 2, 2)).unwrap(); // lp = 4
        assert!(witness_certificate_check(&t, 1));
        let t = SpeedTuple::new(vec![1, 2, 3], params(3, 5, 1)).unwrap();
        assert!(!witness_certificate_check(&t, 1));
        // (1, 2, ..., k) at lp = k+1 and a = 1
        for k in [3u32, 4, 6, 10] {
            let prm = params(k, u64::from(k) + 1, 1);
            let coords: Vec<u64> = (1..=u64::from(k)).collect();
            let t = SpeedTuple::new(coords, prm).unwrap();
            assert!(witness_certificate_check(&t, 1), "k={k}");
        }
    }

    #[test]
    fn witness_check_agrees_with_norm_ok() {
        let prm = params(4, 7, 3);
        let tuples = [[1u64, 2, 3, 4], [5, 6, 8, 9], [20, 19, 2, 1]];
        for coords in tuples {
            let t = SpeedTuple::new(coords.to_vec(), prm).unwrap();
            for a in 0..prm.lp() {
                let direct = coords.iter().all(|&v| prm.norm_ok(a, v));
                assert_eq!(witness_certificate_check(&t, a), direct, "a={a} {coords:?}");
            }
        }
    }

    #[test]
    fn popcount_nonincreasing_under_intersection() {
        let prm = params(3, 7, 2);
        let mut acc = admissible_set(1, &prm);
        let mut last = acc.count();
        for v in [2u64, 3, 9, 11] {
            acc.and_assign(&admissible_set(v, &prm));
            let now = acc.count();
            assert!(now <= last);
            last = now;
        }
    }

    #[test]
    fn smallest_witness_is_reported() {
        let prm = params(3, 5, 4);
        let cache = cache_for_coords(prm, [1u64, 2, 3].iter());
        let mut acc = NumeratorSet::empty(prm.lp());
        match is_proper_coords(&[1, 2, 3], &cache, &mut acc) {
            ProperVerdict::ProperByWitness(a) => {
                for b in 0..a {
                    let t = SpeedTuple::new(vec![1, 2, 3], prm).unwrap();
                    assert!(!witness_certificate_check(&t, b));
                }
            }
            v => panic!("expected witness, got {v:?}"),
        }
    }
}
