//! Exact integer helpers: gcd, modular inverse, deterministic primality,
//! and the sign-flip fold on residues.

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// (a * b) mod m, exact for any u64 operands.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by binary exponentiation.
pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of a mod m via extended Euclid, or None when gcd(a, m) != 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let a = a % m;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        let r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        let t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if r0 != 1 {
        return None;
    }
    let m = m as i128;
    Some(((t0 % m + m) % m) as u64)
}

/// Deterministic Miller-Rabin, valid for the full u64 range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n-1 = d * 2^s with d odd
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    // This base set is deterministic for all n < 3.3 * 10^24.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than n.
pub fn next_prime_after(n: u64) -> u64 {
    let mut c = n + 1;
    if c <= 2 {
        return 2;
    }
    if c % 2 == 0 {
        c += 1;
    }
    while !is_prime(c) {
        c += 2;
    }
    c
}

/// Ascending iterator over primes strictly greater than `n`.
pub fn primes_after(n: u64) -> impl Iterator<Item = u64> {
    std::iter::successors(Some(next_prime_after(n)), |&p| Some(next_prime_after(p)))
}

/// Sign-flip normalization on residues mod p: min(x, p - x).
pub fn fold(x: u64, p: u64) -> u64 {
    debug_assert!(x < p);
    x.min(p - x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_basic() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(gcd(1, 999), 1);
    }

    #[test]
    fn mod_inverse_agrees_with_product() {
        for m in [5u64, 7, 97, 101, 1009] {
            for a in 1..m.min(60) {
                let inv = mod_inverse(a, m).unwrap();
                assert_eq!(mul_mod(a, inv, m), 1, "a={a} m={m}");
            }
        }
        assert_eq!(mod_inverse(0, 7), None);
        assert_eq!(mod_inverse(6, 9), None);
        assert_eq!(mod_inverse(4, 6), None);
    }

    #[test]
    fn primality_small_and_known() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
        );
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
    }

    #[test]
    fn fold_involution_compatibility() {
        // fold(p - x) = fold(x) for all x in (0, p)
        for p in [5u64, 7, 11, 13, 101] {
            for x in 1..p {
                assert_eq!(fold(p - x, p), fold(x, p));
            }
            assert_eq!(fold(0, p), 0);
        }
    }

    #[test]
    fn fold_examples() {
        assert_eq!(fold(6, 7), 1);
        assert_eq!(fold(3, 7), 3);
        assert_eq!(fold(0, 7), 0);
    }

    #[test]
    fn primes_after_walks_ascending() {
        let got: Vec<u64> = primes_after(4).take(5).collect();
        assert_eq!(got, vec![5, 7, 11, 13, 17]);
    }
}
