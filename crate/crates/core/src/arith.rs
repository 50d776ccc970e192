//! Exact integer arithmetic: discriminants of finite fields, the
//! Hasse-Weil-Serre bound, prime-power recognition and scanning.
//!
//! Everything here is integer-only; `floor(2 sqrt(q))` is computed as
//! `isqrt(4q)` in 128-bit arithmetic.

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floor square root: the `s` with `s^2 <= n < (s+1)^2`.
pub fn isqrt(n: u128) -> u128 {
    n.isqrt()
}

/// A prime power `q = p^r` together with the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub q: u64,
    pub p: u64,
    pub r: u32,
    /// `floor(2 sqrt(q))`
    pub x: u64,
    /// `x^2 - 4q`
    pub d: i64,
    pub residue5: u8,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let (p, r) = is_prime_power(q)?.ok_or(Error::NotPrimePower(q))?;
        Ok(Self::from_parts(q, p, r))
    }

    fn from_parts(q: u64, p: u64, r: u32) -> Self {
        let four_q = 4 * q as u128;
        let x = isqrt(four_q);
        let d = (x * x) as i128 - four_q as i128;
        PrimePower { q, p, r, x: x as u64, d: d as i64, residue5: (q % 5) as u8 }
    }
}

/// `d(F_q) = floor(2 sqrt(q))^2 - 4q`.
pub fn discriminant(q: &PrimePower) -> i64 {
    q.d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u64,
    pub g: u64,
    pub n_max: u128,
}

/// Hasse-Weil-Serre bound `q + 1 + g floor(2 sqrt(q))`.
pub fn hws_bound(q: &PrimePower, g: u64) -> BoundReport {
    BoundReport { q: q.q, g, n_max: q.q as u128 + 1 + g as u128 * q.x as u128 }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Returns `(p, r)` with `n = p^r`, or `None` when `n` is not a prime power.
pub fn is_prime_power(n: u64) -> Result<Option<(u64, u32)>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("prime-power test needs n >= 2, got {n}")));
    }
    if is_prime(n) {
        return Ok(Some((n, 1)));
    }
    let max_r = 63 - n.leading_zeros();
    for r in (2..=max_r).rev() {
        let p = n.nth_root(r);
        if p >= 2 && p.checked_pow(r) == Some(n) && is_prime(p) {
            return Ok(Some((p, r)));
        }
    }
    Ok(None)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..r.min(128).min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let f = pollard_brent(m);
        stack.push(f);
        stack.push(m / f);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1` required).
pub fn multiplicative_order_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, a, m);
        k += 1;
    }
    Some(k)
}

/// Primes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const SEGMENT: u64 = 1 << 22;

/// All prime powers in the half-open range `[lo, hi)`, ascending.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<PrimePower> {
    let lo = lo.max(2);
    if hi <= lo {
        return Vec::new();
    }
    let base = primes_up_to(isqrt((hi - 1) as u128) as u64);
    let mut out = Vec::new();

    let mut seg_lo = lo;
    while seg_lo < hi {
        let seg_hi = (seg_lo + SEGMENT).min(hi);
        let mut composite = vec![false; (seg_hi - seg_lo) as usize];
        for &p in &base {
            let start = (p * p).max(seg_lo.div_ceil(p) * p);
            let mut m = start;
            while m < seg_hi {
                composite[(m - seg_lo) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            if !c {
                let q = seg_lo + i as u64;
                out.push(PrimePower::from_parts(q, q, 1));
            }
        }
        seg_lo = seg_hi;
    }

    for &p in &base {
        let mut q = p * p;
        let mut r = 2;
        while q < hi {
            if q >= lo {
                out.push(PrimePower::from_parts(q, p, r));
            }
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
            r += 1;
        }
    }
    out.sort_unstable_by_key(|pp| pp.q);
    out
}

/// Prime powers `q` in `[lo, hi)` whose discriminant equals `d_target`.
///
/// The discriminant is always taken from the floor definition. The shortcut
/// "`4q + d` is a perfect square" misfires for small `q` (e.g. `q = 25`).
pub fn scan_discriminant_range(d_target: i64, lo: u64, hi: u64) -> Vec<PrimePower> {
    prime_powers_in(lo, hi).into_iter().filter(|pp| pp.d == d_target).collect()
}

/// Prime powers `q <= q_max` with `d(F_q) = d_target`.
pub fn scan_discriminant(d_target: i64, q_max: u64) -> Vec<PrimePower> {
    scan_discriminant_range(d_target, 2, q_max.saturating_add(1))
}

/// Whether 5 divides `#PGL_3(F_q) = q^3 (q^3 - 1) (q^2 - 1)`.
pub fn pgl3_order_divisible_by_5(q: &PrimePower) -> bool {
    let t = q.q % 5;
    let t3 = t * t * t % 5;
    let t2 = t * t % 5;
    (t3 * ((t3 + 4) % 5) * ((t2 + 4) % 5)) % 5 == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bitwise_isqrt(n: u128) -> u128 {
        let mut lo = 0u128;
        let mut hi = 1u128 << 64;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if mid.checked_mul(mid).is_some_and(|m| m <= n) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn trial_division_prime_power(n: u64) -> Option<(u64, u32)> {
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                let mut m = n;
                let mut r = 0;
                while m % p == 0 {
                    m /= p;
                    r += 1;
                }
                return (m == 1).then_some((p, r));
            }
            p += 1;
        }
        Some((n, 1))
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(312_500), 559);
        assert_eq!(isqrt(244), 15);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&PrimePower::new(78_125).unwrap()), -19);
        assert_eq!(discriminant(&PrimePower::new(4).unwrap()), 0);
        assert_eq!(discriminant(&PrimePower::new(61).unwrap()), -19);
        assert_eq!(PrimePower::new(245), Err(Error::NotPrimePower(245)));
        assert_eq!(PrimePower::new(1), Err(Error::NotPrimePower(1)));
    }

    #[test]
    fn bound_examples() {
        let q61 = PrimePower::new(61).unwrap();
        assert_eq!(hws_bound(&q61, 5).n_max, 137);
        assert_eq!(hws_bound(&q61, 0).n_max, 62);
        assert_eq!(hws_bound(&PrimePower::new(78_125).unwrap(), 5).n_max, 80_921);
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(is_prime_power(78_125).unwrap(), Some((5, 7)));
        assert_eq!(is_prime_power(61).unwrap(), Some((61, 1)));
        assert_eq!(is_prime_power(245).unwrap(), None);
        assert!(is_prime_power(1).is_err());
        assert_eq!(is_prime_power(1 << 62).unwrap(), Some((2, 62)));
        for n in 2..5000u64 {
            assert_eq!(is_prime_power(n).unwrap(), trial_division_prime_power(n), "{n}");
        }
    }

    #[test]
    fn scan_examples() {
        let qs: Vec<u64> = scan_discriminant(-19, 350).iter().map(|p| p.q).collect();
        // 37^2 - 4*347 = -19, so 347 belongs to the list as well.
        assert_eq!(qs, vec![47, 61, 137, 277, 311, 347]);
        let res: Vec<u8> = scan_discriminant(-19, 350).iter().map(|p| p.residue5).collect();
        assert_eq!(res, vec![2, 1, 2, 2, 1, 2]);
        // 4*25 - 19 = 81 is a square, but isqrt(100) = 10.
        assert!(!qs.contains(&25));
        assert_eq!(PrimePower::new(25).unwrap().d, 0);
        let zeros: Vec<u64> = scan_discriminant(0, 20).iter().map(|p| p.q).collect();
        assert_eq!(zeros, vec![4, 9, 16]);
        assert!(scan_discriminant(-19, 1).is_empty());
    }

    #[test]
    fn scan_matches_brute_force() {
        let fast = scan_discriminant(-19, 20_000);
        let brute: Vec<u64> = (2..=20_000u64)
            .filter(|&n| trial_division_prime_power(n).is_some())
            .filter(|&n| {
                let x = bitwise_isqrt(4 * n as u128) as i128;
                x * x - 4 * n as i128 == -19
            })
            .collect();
        assert_eq!(fast.iter().map(|p| p.q).collect::<Vec<_>>(), brute);
    }

    #[test]
    fn segmented_prime_powers_match_sieve() {
        let all = prime_powers_in(2, 100_000);
        let split: Vec<u64> =
            prime_powers_in(2, 31_337).into_iter().chain(prime_powers_in(31_337, 100_000)).map(|p| p.q).collect();
        assert_eq!(all.iter().map(|p| p.q).collect::<Vec<_>>(), split);
        for pp in &all {
            assert_eq!(pp.p.pow(pp.r), pp.q);
        }
    }

    #[test]
    fn pgl3_examples() {
        assert!(!pgl3_order_divisible_by_5(&PrimePower::new(47).unwrap()));
        assert!(pgl3_order_divisible_by_5(&PrimePower::new(11).unwrap()));
        assert!(pgl3_order_divisible_by_5(&PrimePower::new(5).unwrap()));
    }

    #[test]
    fn pgl3_residue_rule() {
        for pp in prime_powers_in(2, 100_001) {
            let exact = {
                let q = pp.q as u128;
                q * q * q % 5 * ((q * q * q - 1) % 5) * ((q * q - 1) % 5) % 5 == 0
            };
            assert_eq!(pgl3_order_divisible_by_5(&pp), exact);
            let expected = !matches!(pp.residue5, 2 | 3);
            assert_eq!(pgl3_order_divisible_by_5(&pp), expected, "q = {}", pp.q);
        }
    }

    #[test]
    fn discriminant_invariants_up_to_a_million() {
        for pp in prime_powers_in(2, 1_000_001) {
            assert!(pp.d <= 0);
            let four_q = 4 * pp.q as u128;
            let s = bitwise_isqrt(four_q);
            assert_eq!(pp.d == 0, s * s == four_q);
            if pp.d == -19 {
                let x = pp.x as i128;
                assert_eq!((-x * x + 1 - pp.q as i128).rem_euclid(5), 0);
                assert!(pp.residue5 <= 2);
            }
        }
    }

    #[test]
    fn factorize_reconstructs() {
        for n in [2u64, 60, 78_124, 600_851_475_143, 18_446_744_073_709_551_557, (1 << 61) - 2] {
            let f = factorize(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }

    proptest! {
        #[test]
        fn isqrt_agrees_with_bitwise_oracle(n in 0u64..(1u64 << 63)) {
            prop_assert_eq!(isqrt(n as u128), bitwise_isqrt(n as u128));
        }

        #[test]
        fn shortcut_agrees_once_x_at_least_ten(q in 25u64..2_000_000) {
            // d = -19 iff 4q - 19 is a square, provided isqrt(4q) >= 10
            let four_q = 4 * q as u128;
            let x = isqrt(four_q);
            prop_assume!(x >= 10);
            let d = (x * x) as i128 - four_q as i128;
            let s = isqrt(four_q - 19);
            prop_assert_eq!(d == -19, s * s == four_q - 19);
        }
    }

    #[test]
    fn isqrt_random_sample() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100_000 {
            let n: u64 = rng.random::<u64>() >> 1;
            assert_eq!(isqrt(n as u128), bitwise_isqrt(n as u128));
        }
    }
}
