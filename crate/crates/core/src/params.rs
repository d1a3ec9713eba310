//! Ansatz parameters and speed tuples.
//!
//! An ansatz fixes a universe of speed tuples with coordinates in
//! Z_{p,l} = Z_{pl} \ pZ_l (residues mod lp not divisible by p) together
//! with the allowed witness times (1/lp)Z. All arithmetic is exact: the
//! constructor rejects parameters for which (k+1)*lp or lp^2 would leave
//! the u64 range, so every product formed later fits without widening.

use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};

/// The triple (k, p, l) plus derived quantities. p is prime, l >= 1, k >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnsatzParams {
    k: u32,
    p: u64,
    l: u64,
    lp: u64,
    band_lo: u64,
    band_hi: u64,
}

impl AnsatzParams {
    pub fn new(k: u32, p: u64, l: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::KTooSmall(k));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if l == 0 {
            return Err(Error::ZeroLiftLevel);
        }
        let lp = l
            .checked_mul(p)
            .ok_or_else(|| Error::ParamOverflow(format!("l*p = {l}*{p} exceeds u64")))?;
        let k1 = u64::from(k) + 1;
        k1.checked_mul(lp).ok_or_else(|| {
            Error::ParamOverflow(format!("(k+1)*lp = {k1}*{lp} exceeds u64"))
        })?;
        lp.checked_mul(lp).ok_or_else(|| {
            Error::ParamOverflow(format!("lp^2 = {lp}^2 exceeds u64; lp must stay below 2^32"))
        })?;
        // Admissible residue band: m in [ceil(lp/(k+1)), floor(k*lp/(k+1))].
        let band_lo = lp.div_ceil(k1);
        let band_hi = u64::from(k) * lp / k1;
        Ok(Self {
            k,
            p,
            l,
            lp,
            band_lo,
            band_hi,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn k_usize(&self) -> usize {
        self.k as usize
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    /// Denominator of the allowed times: lp.
    pub fn lp(&self) -> u64 {
        self.lp
    }

    /// Inclusive residue band [lo, hi] such that (a*v) mod lp in the band
    /// is equivalent to norm_ok(a, v).
    pub fn band(&self) -> (u64, u64) {
        (self.band_lo, self.band_hi)
    }

    /// Same (k, p) at l = 1.
    pub fn base(&self) -> Self {
        Self::new(self.k, self.p, 1).expect("base parameters are valid by construction")
    }

    /// Same (k, p) at level c*l. Errors name the largest admissible multiplier.
    pub fn lift(&self, c: u64) -> Result<Self> {
        if c < 2 {
            return Err(Error::BadLiftMultiplier(c));
        }
        match self.l.checked_mul(c).map(|cl| Self::new(self.k, self.p, cl)) {
            Some(Ok(p)) => Ok(p),
            _ => {
                let max_lp = (u64::MAX / (u64::from(self.k) + 1)).min((1u64 << 32) - 1);
                let max_c = max_lp / self.lp;
                Err(Error::ParamOverflow(format!(
                    "lifting by {c} from l={} overflows; the largest admissible multiplier here is {max_c}",
                    self.l
                )))
            }
        }
    }

    /// Membership in Z_{p,l}: a residue mod lp whose projection mod p is nonzero.
    pub fn in_speed_domain(&self, v: u64) -> bool {
        v < self.lp && v % self.p != 0
    }

    /// True iff the time a/lp puts a runner with speed v at distance >= 1/(k+1)
    /// from the origin: with m = (a*v) mod lp, checks lp <= (k+1)*m <= k*lp.
    pub fn norm_ok(&self, a: u64, v: u64) -> bool {
        debug_assert!(a < self.lp && v < self.lp);
        // lp^2 fits in u64 by construction, so a*v cannot overflow.
        let m = (a * v) % self.lp;
        let k1m = (u64::from(self.k) + 1) * m;
        self.lp <= k1m && k1m <= u64::from(self.k) * self.lp
    }
}

/// A validated length-k vector of Z_{p,l} residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeedTuple {
    coords: Vec<u64>,
    params: AnsatzParams,
}

impl SpeedTuple {
    pub fn new(coords: Vec<u64>, params: AnsatzParams) -> Result<Self> {
        if coords.len() != params.k_usize() {
            return Err(Error::BadTupleLength {
                got: coords.len(),
                expected: params.k_usize(),
            });
        }
        for &c in &coords {
            if c >= params.lp() {
                return Err(Error::BadCoordinate {
                    coord: c,
                    k: params.k(),
                    p: params.p(),
                    l: params.l(),
                    reason: format!("not a residue mod {}", params.lp()),
                });
            }
            if c % params.p() == 0 {
                return Err(Error::BadCoordinate {
                    coord: c,
                    k: params.k(),
                    p: params.p(),
                    l: params.l(),
                    reason: format!("divisible by p = {}", params.p()),
                });
            }
        }
        Ok(Self { coords, params })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn params(&self) -> &AnsatzParams {
        &self.params
    }
}

/// The gcd escape hatch of properness: Some(i) for the smallest index i such
/// that gcd(l, v_1, ..., omitting v_i, ..., v_k) > 1. Always None when l = 1.
pub fn gcd_condition_index(coords: &[u64], l: u64) -> Option<usize> {
    if l == 1 {
        return None;
    }
    let k = coords.len();
    // prefix[i] = gcd(l, coords[..i]); suffix[i] = gcd(l, coords[i..])
    let mut prefix = vec![l; k + 1];
    for i in 0..k {
        prefix[i + 1] = gcd(prefix[i], coords[i]);
    }
    let mut suffix = vec![l; k + 1];
    for i in (0..k).rev() {
        suffix[i] = gcd(suffix[i + 1], coords[i]);
    }
    (0..k).find(|&i| gcd(prefix[i], suffix[i + 1]) > 1)
}
