//! Finite fields `F_{p^r}`.
//!
//! Elements are plain integer codes: the coefficient vector
//! `(c_0, .., c_{r-1})` of `c_0 + c_1 t + .. + c_{r-1} t^{r-1}` packed as
//! `sum c_i p^i`. Arithmetic always goes through a [`FieldSpec`], which owns
//! the modulus. Codes double as dense table indices in `0..q`.
//!
//! Conventions (frozen, golden outputs depend on them):
//! * the modulus for `(p, r)` is the lexicographically smallest monic
//!   irreducible polynomial of degree `r`, comparing `(c_0, c_1, ..)` as
//!   integers; for `r = 1` it is `x`;
//! * the multiplicative generator is the smallest code of full order and a
//!   primitive `k`-th root of unity is `g^((q-1)/k)`;
//! * a square root is the smaller code of the two roots.

mod matrix;
pub mod poly;

use std::sync::OnceLock;

pub use matrix::{Matrix, Solution};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

const MAX_DEGREE: usize = 64;

/// Element code of `F_q`. Only meaningful together with its [`FieldSpec`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u64);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn code(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
pub struct FieldSpec {
    p: u64,
    r: u32,
    q: u64,
    /// Monic, low-to-high, length `r + 1`.
    modulus: Vec<u64>,
    group_factors: OnceLock<Vec<(u64, u32)>>,
    generator: OnceLock<Fq>,
    non_residue: OnceLock<Option<Fq>>,
}

impl Clone for FieldSpec {
    fn clone(&self) -> Self {
        FieldSpec {
            p: self.p,
            r: self.r,
            q: self.q,
            modulus: self.modulus.clone(),
            group_factors: self.group_factors.clone(),
            generator: self.generator.clone(),
            non_residue: self.non_residue.clone(),
        }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

fn checked_order(p: u64, r: u32) -> Result<u64> {
    if r == 0 || r as usize > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!("extension degree must be in 1..={MAX_DEGREE}, got {r}")));
    }
    match p.checked_pow(r) {
        Some(q) if q <= 1 << 63 => Ok(q),
        _ => Err(Error::InvalidArgument(format!("{p}^{r} exceeds 2^63"))),
    }
}

impl FieldSpec {
    fn raw(p: u64, r: u32, q: u64, modulus: Vec<u64>) -> Self {
        FieldSpec {
            p,
            r,
            q,
            modulus,
            group_factors: OnceLock::new(),
            generator: OnceLock::new(),
            non_residue: OnceLock::new(),
        }
    }

    /// Builds `F_{p^r}` with the canonical modulus.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = checked_order(p, r)?;
        if r == 1 {
            return Ok(Self::raw(p, 1, q, vec![0, 1]));
        }
        let prime = Self::raw(p, 1, p, vec![0, 1]);
        let modulus = poly::smallest_irreducible(&prime, r as usize);
        Ok(Self::raw(p, r, q, modulus))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// `F_q` for a prime power `q`.
    pub fn from_order(q: u64) -> Result<Self> {
        let pp = crate::arith::PrimePower::new(q)?;
        Self::new(pp.p, pp.r)
    }

    /// Builds `F_p[t] / (modulus)` after checking the modulus is monic and
    /// irreducible.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument("modulus must be monic over F_p".into()));
        }
        let r = (modulus.len() - 1) as u32;
        let q = checked_order(p, r)?;
        let prime = Self::raw(p, 1, p, vec![0, 1]);
        let m: Vec<Fq> = modulus.iter().map(|&c| Fq(c)).collect();
        if r > 1 && !poly::is_irreducible(&prime, &m) {
            return Err(Error::InvalidArgument("modulus is reducible".into()));
        }
        Ok(Self::raw(p, r, q, modulus))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// Checked conversion from a raw code.
    pub fn element(&self, code: u64) -> Result<Fq> {
        if code < self.q {
            Ok(Fq(code))
        } else {
            Err(Error::InvalidArgument(format!("{code} is not an element code of F_{}", self.q)))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq((n as i128).rem_euclid(self.p as i128) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fq> {
        if coeffs.len() > self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "coefficient vector {coeffs:?} does not describe an element of F_{}",
                self.q
            )));
        }
        Ok(Fq(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)))
    }

    /// Coefficient vector, low degree first, always of length `r`.
    pub fn coeffs(&self, a: Fq) -> Vec<u64> {
        let mut out = vec![0; self.r as usize];
        self.decode(a, &mut out);
        out
    }

    fn decode(&self, a: Fq, out: &mut [u64]) {
        let mut x = a.0;
        for c in out.iter_mut().take(self.r as usize) {
            *c = x % self.p;
            x /= self.p;
        }
    }

    fn encode(&self, digits: &[u64]) -> Fq {
        Fq(digits[..self.r as usize].iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.r == 1 {
            let s = a.0 as u128 + b.0 as u128;
            return Fq((s % self.p as u128) as u64);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.r {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place = place.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        Fq(out)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.r == 1 {
            return if a.0 == 0 { a } else { Fq(self.p - a.0) };
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.r {
            let d = x % self.p;
            out += if d == 0 { 0 } else { (self.p - d) * place };
            place = place.wrapping_mul(self.p);
            x /= self.p;
        }
        Fq(out)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if self.r == 1 {
            return Fq(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let r = self.r as usize;
        let p = self.p as u128;
        let mut da = [0u64; MAX_DEGREE];
        let mut db = [0u64; MAX_DEGREE];
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        let mut prod = [0u128; 2 * MAX_DEGREE];
        for i in 0..r {
            if da[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] += da[i] as u128 * db[j] as u128;
            }
        }
        for k in (r..2 * r - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            // t^k = t^(k-r) * (-(m_0 + .. + m_{r-1} t^{r-1}))
            for j in 0..r {
                prod[k - r + j] += (p - self.modulus[j] as u128 % p) % p * c;
            }
        }
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..r {
            out[i] = (prod[i] % p) as u64;
        }
        self.encode(&out)
    }

    pub fn square(&self, a: Fq) -> Fq {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Fq, mut e: u128) -> Fq {
        let mut acc = Fq::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for a signed integer exponent (`a` nonzero when `e < 0`).
    pub fn pow_signed(&self, a: Fq, e: i64) -> Result<Fq> {
        if e >= 0 {
            Ok(self.pow(a, e as u128))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs() as u128))
        }
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.r == 1 {
            // extended Euclid on (a, p)
            let (mut old_r, mut rr) = (a.0 as i128, self.p as i128);
            let (mut old_s, mut s) = (1i128, 0i128);
            while rr != 0 {
                let quo = old_r / rr;
                (old_r, rr) = (rr, old_r - quo * rr);
                (old_s, s) = (s, old_s - quo * s);
            }
            return Ok(Fq(old_s.rem_euclid(self.p as i128) as u64));
        }
        Ok(self.pow(a, self.q as u128 - 2))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Factorization of `q - 1`.
    pub fn group_order_factors(&self) -> &[(u64, u32)] {
        self.group_factors.get_or_init(|| factorize(self.q - 1))
    }

    /// Exact multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Fq) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut order = self.q - 1;
        for &(l, e) in self.group_order_factors() {
            for _ in 0..e {
                if self.pow(a, (order / l) as u128) == Fq::ONE {
                    order /= l;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// Smallest code generating `F_q^*`.
    pub fn generator(&self) -> Fq {
        *self.generator.get_or_init(|| {
            let n = self.q - 1;
            let factors: Vec<u64> = self.group_order_factors().iter().map(|f| f.0).collect();
            (1..self.q)
                .map(Fq)
                .find(|&g| factors.iter().all(|&l| self.pow(g, (n / l) as u128) != Fq::ONE))
                .expect("finite fields have cyclic unit groups")
        })
    }

    /// Element of exact multiplicative order `k`, namely `g^((q-1)/k)`.
    pub fn primitive_root_of_unity(&self, k: u64) -> Result<Fq> {
        if k == 0 || (self.q - 1) % k != 0 {
            return Err(Error::NoRootOfUnity { k, q: self.q });
        }
        Ok(self.pow(self.generator(), ((self.q - 1) / k) as u128))
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a.is_zero() || self.p == 2 || self.pow(a, ((self.q - 1) / 2) as u128) == Fq::ONE
    }

    fn non_residue(&self) -> Option<Fq> {
        *self.non_residue.get_or_init(|| {
            if self.p == 2 {
                return None;
            }
            let minus_one = self.neg(Fq::ONE);
            (2..self.q).map(Fq).find(|&z| self.pow(z, ((self.q - 1) / 2) as u128) == minus_one)
        })
    }

    /// A square root of `a`, if one exists (the smaller code of `s`, `-s`).
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return Some(a);
        }
        if self.p == 2 {
            // Frobenius is bijective; sqrt(a) = a^(q/2)
            return Some(self.pow(a, (self.q / 2) as u128));
        }
        if !self.is_square(a) {
            return None;
        }
        let s = if self.q % 4 == 3 { self.pow(a, ((self.q + 1) / 4) as u128) } else { self.tonelli_shanks(a) };
        debug_assert_eq!(self.square(s), a);
        Some(s.min(self.neg(s)))
    }

    fn tonelli_shanks(&self, a: Fq) -> Fq {
        let mut odd = self.q - 1;
        let mut two_adic = 0u32;
        while odd % 2 == 0 {
            odd /= 2;
            two_adic += 1;
        }
        let z = self.non_residue().expect("odd characteristic has non-residues");
        let mut m = two_adic;
        let mut c = self.pow(z, odd as u128);
        let mut t = self.pow(a, odd as u128);
        let mut root = self.pow(a, odd.div_ceil(2) as u128);
        while t != Fq::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != Fq::ONE {
                t2 = self.square(t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(b);
            }
            m = i;
            c = self.square(b);
            t = self.mul(t, c);
            root = self.mul(root, b);
        }
        root
    }

    /// Roots of `x^2 + b x + c` in `F_q`, ascending by code.
    pub fn quadratic_roots(&self, b: Fq, c: Fq) -> Result<Vec<Fq>> {
        if self.p == 2 {
            return Err(Error::UnsupportedCharacteristic { p: 2, reason: "quadratic formula needs 2 invertible" });
        }
        let four_c = self.mul(self.from_int(4), c);
        let disc = self.sub(self.square(b), four_c);
        let Some(s) = self.sqrt(disc) else {
            return Ok(Vec::new());
        };
        let half = self.inv(self.from_int(2))?;
        let minus_b = self.neg(b);
        let mut roots = vec![self.mul(self.add(minus_b, s), half), self.mul(self.sub(minus_b, s), half)];
        roots.sort_unstable();
        roots.dedup();
        Ok(roots)
    }

    /// `F_{q^e}` together with the embedding of this field into it.
    ///
    /// For a prime field the embedding is the identity on codes. Otherwise
    /// the image of `t` is the smallest root of this field's modulus in the
    /// extension, found by enumeration (at most `2^26` candidates).
    pub fn extension(&self, e: u32) -> Result<(FieldSpec, Embedding)> {
        let big = FieldSpec::new(self.p, self.r * e)?;
        if self.r == 1 {
            return Ok((big, Embedding { theta_powers: vec![Fq::ONE], p: self.p, r: 1 }));
        }
        const SEARCH_BUDGET: u64 = 1 << 26;
        if big.q > SEARCH_BUDGET {
            return Err(Error::BudgetExceeded { needed: big.q as u128, budget: SEARCH_BUDGET as u128 });
        }
        let lifted: Vec<Fq> = self.modulus.iter().map(|&c| Fq(c)).collect();
        let theta = big
            .elements()
            .find(|&t| poly::eval(&big, &lifted, t).is_zero())
            .expect("a degree-r polynomial splits in F_{p^(re)}");
        let mut theta_powers = vec![Fq::ONE];
        for _ in 1..self.r {
            theta_powers.push(big.mul(*theta_powers.last().unwrap(), theta));
        }
        Ok((big, Embedding { theta_powers, p: self.p, r: self.r }))
    }
}

/// Field embedding `F_q -> F_{q^e}` produced by [`FieldSpec::extension`].
#[derive(Debug, Clone)]
pub struct Embedding {
    theta_powers: Vec<Fq>,
    p: u64,
    r: u32,
}

impl Embedding {
    pub fn apply(&self, big: &FieldSpec, a: Fq) -> Fq {
        if self.r == 1 {
            return a;
        }
        let mut x = a.0;
        let mut acc = Fq::ZERO;
        for &tp in &self.theta_powers {
            let c = x % self.p;
            x /= self.p;
            acc = big.add(acc, big.mul(Fq(c), tp));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn build_examples() {
        let f11 = FieldSpec::new(11, 1).unwrap();
        assert_eq!((f11.q(), f11.modulus()), (11, &[0, 1][..]));
        assert_eq!(FieldSpec::new(4, 1), Err(Error::NotPrime(4)));
        assert!(FieldSpec::new(2, 64).is_err());
        let big = FieldSpec::new(47, 4).unwrap();
        assert_eq!(big.q(), 47u64.pow(4));
        assert_eq!(big.modulus().len(), 5);
        assert_eq!(FieldSpec::new(47, 4).unwrap(), big, "modulus choice is deterministic");
    }

    /// Brute-force irreducibility of a quartic: no roots and no monic
    /// quadratic factor.
    fn quartic_is_irreducible_brute(p: u64, m: &[u64]) -> bool {
        let fp = FieldSpec::prime(p).unwrap();
        let m: Vec<Fq> = m.iter().map(|&c| Fq(c)).collect();
        if fp.elements().any(|x| poly::eval(&fp, &m, x).is_zero()) {
            return false;
        }
        for c0 in 0..p {
            for c1 in 0..p {
                let quad = vec![Fq(c0), Fq(c1), Fq(1)];
                let (_, rem) = poly::div_rem(&fp, &m, &quad);
                if rem.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn modulus_for_47_4_is_irreducible() {
        let big = FieldSpec::new(47, 4).unwrap();
        assert!(quartic_is_irreducible_brute(47, big.modulus()));
        // every lexicographically smaller candidate has a factor of degree <= 2,
        // detected through gcd(x^(47^k) - x, m) for k = 1, 2
        let fp = FieldSpec::prime(47).unwrap();
        let m = big.modulus().to_vec();
        let x = [Fq::ZERO, Fq::ONE];
        let has_small_factor = |cand: &[u64]| {
            let c: Vec<Fq> = cand.iter().map(|&v| Fq(v)).collect();
            (1..=2).any(|k| {
                let h = poly::frobenius_x(&fp, k, &c);
                poly::degree(&poly::gcd(&fp, &poly::sub(&fp, &h, &x), &c)) != Some(0)
            })
        };
        assert!(!has_small_factor(&m));
        let key = |c: &[u64]| (c[0], c[1], c[2], c[3]);
        let mut smaller = 0;
        for c0 in 1..=m[0] {
            for c1 in 0..47 {
                for c2 in 0..47 {
                    for c3 in 0..47 {
                        let cand = [c0, c1, c2, c3, 1];
                        if key(&cand) >= key(&m) {
                            continue;
                        }
                        smaller += 1;
                        assert!(has_small_factor(&cand), "{cand:?}");
                    }
                }
            }
        }
        assert!(smaller > 0 || key(&m) == (1, 0, 0, 0));
    }

    #[test]
    fn arithmetic_examples() {
        let f = FieldSpec::prime(11).unwrap();
        assert_eq!(f.pow(Fq(3), 5), Fq(1));
        assert_eq!(f.inv(Fq(2)).unwrap(), Fq(6));
        assert_eq!(f.inv(Fq(0)), Err(Error::DivisionByZero));
        assert_eq!(f.pow(Fq(0), 0), Fq(1));
        for a in f.elements() {
            assert_eq!(f.mul(a, Fq::ONE), a);
        }
    }

    #[test]
    fn extension_axioms_small() {
        for (p, r) in [(3u64, 2u32), (2, 4), (5, 3), (7, 2)] {
            let f = FieldSpec::new(p, r).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, f.q() as u128), a, "Frobenius in F_{}^{}", p, r);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(f.sub(a, b), b), a);
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn frobenius_full_field_up_to_2000() {
        for q in [11u64, 25, 27, 49, 121, 125, 343, 625, 1331, 1849] {
            let f = FieldSpec::from_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, q as u128), a);
            }
        }
    }

    #[test]
    fn roots_of_unity_examples() {
        let f11 = FieldSpec::prime(11).unwrap();
        let z5 = f11.primitive_root_of_unity(5).unwrap();
        assert_eq!(f11.pow(z5, 5), Fq::ONE);
        assert_ne!(z5, Fq::ONE);
        let g = f11.primitive_root_of_unity(10).unwrap();
        assert_ne!(f11.pow(g, 2), Fq::ONE);
        assert_ne!(f11.pow(g, 5), Fq::ONE);
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.primitive_root_of_unity(5), Err(Error::NoRootOfUnity { k: 5, q: 7 }));
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        for q in [11u64, 31, 61, 121, 81, 625 - 4 /* 621 not prime power */] {
            let Ok(f) = FieldSpec::from_order(q) else { continue };
            for k in 1..=(q - 1) {
                if (q - 1) % k != 0 {
                    continue;
                }
                let z = f.primitive_root_of_unity(k).unwrap();
                assert_eq!(f.pow(z, k as u128), Fq::ONE);
                for (l, _) in factorize(k) {
                    assert_ne!(f.pow(z, (k / l) as u128), Fq::ONE);
                }
                assert_eq!(f.multiplicative_order(z).unwrap(), k);
            }
        }
    }

    #[test]
    fn quadratic_examples() {
        let f11 = FieldSpec::prime(11).unwrap();
        let minus_one = f11.from_int(-1);
        assert_eq!(f11.quadratic_roots(minus_one, Fq(5)).unwrap(), vec![Fq(3), Fq(9)]);
        let f61 = FieldSpec::prime(61).unwrap();
        let roots = f61.quadratic_roots(f61.from_int(-1), Fq(5)).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(f61.add(roots[0], roots[1]), Fq::ONE);
        // Tonelli-Shanks oracle: -19 mod 61 = 42 must be a square
        assert!((0..61u64).any(|s| s * s % 61 == 42));
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(f7.quadratic_roots(Fq(0), Fq(1)).unwrap().is_empty());
        let f2 = FieldSpec::new(2, 3).unwrap();
        assert!(f2.quadratic_roots(Fq(1), Fq(1)).is_err());
    }

    #[test]
    fn square_roots_in_extensions() {
        // q = 5^3 = 125 (q = 1 mod 4) and q = 7^2 = 49 (q = 1 mod 4), 3^3 (3 mod 4)
        for (p, r) in [(5u64, 3u32), (7, 2), (3, 3), (17, 2)] {
            let f = FieldSpec::new(p, r).unwrap();
            let squares: std::collections::HashSet<Fq> = f.elements().map(|a| f.square(a)).collect();
            for a in f.elements() {
                match f.sqrt(a) {
                    Some(s) => assert_eq!(f.square(s), a),
                    None => assert!(!squares.contains(&a)),
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let base = FieldSpec::new(3, 2).unwrap();
        let (big, emb) = base.extension(2).unwrap();
        assert_eq!(big.q(), 81);
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(emb.apply(&big, base.mul(a, b)), big.mul(emb.apply(&big, a), emb.apply(&big, b)));
                assert_eq!(emb.apply(&big, base.add(a, b)), big.add(emb.apply(&big, a), emb.apply(&big, b)));
            }
        }
    }

    fn small_fields() -> impl Strategy<Value = FieldSpec> {
        prop::sample::select(vec![(3u64, 4u32), (5, 2), (7, 3), (11, 2), (13, 1), (61, 2), (2, 6)])
            .prop_map(|(p, r)| FieldSpec::new(p, r).unwrap())
    }

    proptest! {
        #[test]
        fn quadratic_roots_resubstitute(f in small_fields(), b in 0u64..u64::MAX, c in 0u64..u64::MAX) {
            prop_assume!(f.p() != 2);
            let (b, c) = (Fq(b % f.q()), Fq(c % f.q()));
            let roots = f.quadratic_roots(b, c).unwrap();
            for &x in &roots {
                let v = f.add(f.add(f.square(x), f.mul(b, x)), c);
                prop_assert!(v.is_zero());
            }
            if roots.len() == 2 {
                prop_assert_eq!(f.add(roots[0], roots[1]), f.neg(b));
                prop_assert_eq!(f.mul(roots[0], roots[1]), c);
            }
        }

        #[test]
        fn distributive_and_frobenius(f in small_fields(), a in 0u64..u64::MAX, b in 0u64..u64::MAX, c in 0u64..u64::MAX) {
            let (a, b, c) = (Fq(a % f.q()), Fq(b % f.q()), Fq(c % f.q()));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.pow(a, f.q() as u128), a);
            prop_assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
    }
}
