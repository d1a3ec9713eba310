//! Canonical representatives of speed-tuple equivalence classes mod p.
//!
//! Two tuples in Z_{p,1}^k are equivalent when one arises from the other by
//! permuting coordinates, flipping signs of coordinates, and scaling by a
//! unit mod p. Every class has a representative of the shape
//! 1 = v_1 <= v_2 <= ... <= v_k <= (p-1)/2; we pick the lexicographically
//! smallest such representative. It suffices to scan the k candidates
//! sort(fold(t_i^{-1} * t)): any representative with leading 1 comes from
//! scaling by +-t_i^{-1} for some i, and fold absorbs the sign.

use crate::arith::{fold, mod_inverse};
use crate::error::{Error, Result};

/// A tuple fixed by `canonicalize`: nondecreasing, first coordinate 1,
/// all coordinates in [1, (p-1)/2].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTuple {
    coords: Vec<u64>,
    prime: u64,
}

impl CanonicalTuple {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }
}

/// Reusable scratch space for canonicalization-heavy loops.
#[derive(Debug, Clone)]
pub struct Canonicalizer {
    p: u64,
    cand: Vec<u64>,
    best: Vec<u64>,
}

impl Canonicalizer {
    pub fn new(p: u64) -> Self {
        debug_assert!(p <= u32::MAX as u64, "p must stay below 2^32");
        Self {
            p,
            cand: Vec::new(),
            best: Vec::new(),
        }
    }

    /// Writes the canonical form of `t` (nonzero residues mod p) into `out`.
    pub fn canonical_into(&mut self, t: &[u64], out: &mut Vec<u64>) -> Result<()> {
        let p = self.p;
        let k = t.len();
        self.best.clear();
        for i in 0..k {
            let inv = mod_inverse(t[i], p).ok_or(Error::ZeroCoordinate)?;
            self.cand.clear();
            // p < 2^32, so inv * t[j] fits in u64.
            self.cand.extend(t.iter().map(|&tj| fold(inv * tj % p, p)));
            self.cand.sort_unstable();
            if self.best.is_empty() || self.cand < self.best {
                std::mem::swap(&mut self.best, &mut self.cand);
            }
        }
        out.clear();
        out.extend_from_slice(&self.best);
        Ok(())
    }
}

/// Canonical representative of the equivalence class of `t` mod p.
/// Errors with `ZeroCoordinate` when some coordinate is divisible by p.
pub fn canonicalize(t: &[u64], p: u64) -> Result<CanonicalTuple> {
    let mut ctx = Canonicalizer::new(p);
    let mut out = Vec::with_capacity(t.len());
    ctx.canonical_into(t, &mut out)?;
    Ok(CanonicalTuple {
        coords: out,
        prime: p,
    })
}
