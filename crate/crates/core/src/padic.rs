//! 7-adic arithmetic for the Lucas pair `u_n`, `v_n` attached to
//! `x^2 - x + 5`, Strassmann certificates for `u_n = 1`, and the equation
//! `x^2 + 19 = 4 * 5^n`.
//!
//! With `alpha`, `beta` the 7-adic roots, `a = alpha^6 - 1` and
//! `b = beta^6 - 1`, the subsequence `n = r + 6s` satisfies
//! `(alpha - beta)(u_n - 1) = g_r(s)` where
//! `g_r(s) = alpha^r (1 + a)^s - beta^r (1 + b)^s - (alpha - beta)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PRIME: u32 = 7;

fn seven_pow(k: u32) -> BigUint {
    BigUint::from(PRIME).pow(k)
}

/// `v_7(n)` for `n != 0`.
fn val_u64(mut n: u64) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n % 7 == 0 {
        n /= 7;
        v += 1;
    }
    v
}

/// An element of `Z_7` known modulo `7^precision`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicInt {
    precision: u32,
    #[serde(with = "decimal")]
    residue: BigUint,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("invalid decimal integer"))
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod 7^{})", self.residue, self.precision)
    }
}

impl PadicInt {
    pub fn new(residue: BigUint, precision: u32) -> Self {
        let residue = residue % seven_pow(precision);
        PadicInt { precision, residue }
    }

    pub fn from_int(n: &BigInt, precision: u32) -> Self {
        let m = BigInt::from(seven_pow(precision));
        let r = n.mod_floor(&m);
        PadicInt { precision, residue: r.to_biguint().expect("mod_floor is non-negative") }
    }

    pub fn from_i64(n: i64, precision: u32) -> Self {
        Self::from_int(&BigInt::from(n), precision)
    }

    pub fn zero(precision: u32) -> Self {
        PadicInt { precision, residue: BigUint::zero() }
    }

    pub fn one(precision: u32) -> Self {
        Self::new(BigUint::one(), precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// Residue modulo `7^k` for `k <= precision`.
    pub fn residue_mod(&self, k: u32) -> BigUint {
        assert!(k <= self.precision, "residue requested beyond precision");
        &self.residue % seven_pow(k)
    }

    /// Largest `v <= precision` with `7^v` dividing the residue.
    pub fn valuation(&self) -> u32 {
        if self.residue.is_zero() {
            return self.precision;
        }
        let seven = BigUint::from(PRIME);
        let mut r = self.residue.clone();
        let mut v = 0;
        while (&r % &seven).is_zero() {
            r /= &seven;
            v += 1;
        }
        v
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.precision > 0 && !(&self.residue % PRIME).is_zero()
    }

    pub fn with_precision(&self, k: u32) -> Self {
        Self::new(self.residue.clone(), k.min(self.precision))
    }

    fn common(&self, other: &Self) -> (u32, BigUint) {
        let k = self.precision.min(other.precision);
        (k, seven_pow(k))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (k, m) = self.common(other);
        PadicInt { precision: k, residue: (&self.residue + &other.residue) % m }
    }

    pub fn neg(&self) -> Self {
        let m = seven_pow(self.precision);
        PadicInt { precision: self.precision, residue: (&m - &self.residue) % m }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (k, m) = self.common(other);
        PadicInt { precision: k, residue: (&self.residue * &other.residue) % m }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        self.mul(&Self::from_int(n, self.precision))
    }

    pub fn pow(&self, e: u64) -> Self {
        let m = seven_pow(self.precision);
        PadicInt { precision: self.precision, residue: self.residue.modpow(&BigUint::from(e), &m) }
    }

    /// Inverse of a unit.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::DivisionByZero);
        }
        let m = BigInt::from(seven_pow(self.precision));
        let x = BigInt::from(self.residue.clone());
        let g = x.extended_gcd(&m);
        debug_assert!(g.gcd.is_one());
        Ok(Self::from_int(&g.x, self.precision))
    }

    /// Exact division by `7^v`; the result is known to `precision - v`.
    pub fn shift_down(&self, v: u32) -> Result<Self> {
        if self.valuation() < v || v > self.precision {
            return Err(Error::InvalidArgument(format!("{self:?} is not divisible by 7^{v}")));
        }
        Ok(Self::new(&self.residue / seven_pow(v), self.precision - v))
    }

    pub fn shift_up(&self, v: u32) -> Self {
        Self::new(&self.residue * seven_pow(v), self.precision)
    }
}

fn root_poly(x: &PadicInt) -> PadicInt {
    let k = x.precision();
    x.mul(x).sub(x).add(&PadicInt::from_i64(5, k))
}

/// Root of `x^2 - x + 5` congruent to `seed` mod 7, known mod `7^k`.
pub fn hensel_lift(seed: u64, k: u32) -> Result<PadicInt> {
    if k == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let s = seed % 7;
    let f = (s * s + 7 * 7 - s + 5) % 7;
    let df = (2 * s + 6) % 7;
    if f != 0 || df == 0 {
        return Err(Error::InvalidArgument(format!("{seed} is not a simple root of x^2 - x + 5 mod 7")));
    }
    let mut x = PadicInt::from_i64(s as i64, k);
    let mut known = 1u32;
    while known < k {
        // Newton step: x - f(x) / f'(x), doubling the correct digits
        let deriv = x.add(&x).sub(&PadicInt::one(k));
        x = x.sub(&root_poly(&x).mul(&deriv.inv()?));
        known *= 2;
    }
    debug_assert!(root_poly(&x).is_zero_to_precision());
    Ok(x)
}

/// The roots `alpha` (seed 2) and `beta` (seed 6).
pub fn roots(k: u32) -> Result<(PadicInt, PadicInt)> {
    Ok((hensel_lift(2, k)?, hensel_lift(6, k)?))
}

/// `u_0 = 0, u_1 = 1` and `v_0 = 2, v_1 = 1` under `w_n = w_{n-1} - 5 w_{n-2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrencePair {
    pub u: Vec<BigInt>,
    pub v: Vec<BigInt>,
}

impl RecurrencePair {
    pub fn n_max(&self) -> usize {
        self.u.len() - 1
    }

    /// `n` with `u_n = target`, in increasing order.
    pub fn indices_with_u(&self, target: i64) -> Vec<usize> {
        let t = BigInt::from(target);
        self.u.iter().enumerate().filter(|(_, x)| **x == t).map(|(n, _)| n).collect()
    }
}

pub fn recurrence_tables(n_max: usize) -> Result<RecurrencePair> {
    if n_max < 2 {
        return Err(Error::InvalidArgument("n_max must be at least 2".into()));
    }
    let step = |seq: &mut Vec<BigInt>| {
        let n = seq.len();
        let next = &seq[n - 1] - BigInt::from(5) * &seq[n - 2];
        seq.push(next);
    };
    let mut u = vec![BigInt::zero(), BigInt::one()];
    let mut v = vec![BigInt::from(2), BigInt::one()];
    while u.len() <= n_max {
        step(&mut u);
        step(&mut v);
    }
    Ok(RecurrencePair { u, v })
}

/// `u_r mod 7` for `r = 0..6`.
pub fn residue_table() -> [u64; 6] {
    let mut t = [0u64; 6];
    let (mut a, mut b) = (0i64, 1i64);
    for slot in t.iter_mut() {
        *slot = a.rem_euclid(7) as u64;
        (a, b) = (b, (b - 5 * a).rem_euclid(7));
    }
    t
}

/// Residues `r in 0..6` with `u_r = target mod 7`.
pub fn residue_filter(target: i64) -> Vec<u32> {
    let t = target.rem_euclid(7) as u64;
    residue_table().iter().enumerate().filter(|(_, &x)| x == t).map(|(r, _)| r as u32).collect()
}

/// Coefficients of `g_r(s) = sum_k c_k s^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesCoefficients {
    pub r: u32,
    pub precision: u32,
    pub coeffs: Vec<PadicInt>,
    /// `v(c_k) >= ceil((5k + 1) / 6)` for every `k >= 1`.
    pub tail_bound: String,
}

/// Lower bound for `v(c_k)` valid for all `k >= 1`.
pub fn tail_bound(k: u64) -> u64 {
    (5 * k + 1).div_ceil(6)
}

/// Signed Stirling numbers of the first kind `s(m, k)`, `m, k <= n`.
fn stirling_first(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for m in 1..=n {
        for k in 1..=m {
            s[m][k] = &s[m - 1][k - 1] - BigInt::from(m as u64 - 1) * &s[m - 1][k];
        }
    }
    s
}

/// `v(a) = v(b) = 1`: returns `(a, b)` at precision `k + 1`.
pub fn unit_powers_minus_one(k: u32) -> Result<(PadicInt, PadicInt)> {
    let (alpha, beta) = roots(k + 1)?;
    let one = PadicInt::one(k + 1);
    Ok((alpha.pow(6).sub(&one), beta.pow(6).sub(&one)))
}

/// Expands `(1 + a)^s = sum_m a^m binom(s, m)` and
/// `m! binom(s, m) = sum_k s(m, k) s^k`, truncating at the first `m` whose
/// terms vanish modulo `7^precision`.
pub fn series_coefficients(r: u32, precision: u32, k_max: usize) -> Result<SeriesCoefficients> {
    if r != 1 && r != 2 {
        return Err(Error::InvalidArgument(format!("r must be 1 or 2, got {r}")));
    }
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let next = tail_bound(k_max as u64 + 1);
    if next <= precision as u64 {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} too small for precision {precision}: ceil((5*{} + 1)/6) = {next} <= {precision}",
            k_max + 1
        )));
    }
    let k = precision;
    let (a, b) = unit_powers_minus_one(k)?;
    if a.valuation() != 1 || b.valuation() != 1 {
        return Err(Error::Indeterminate("v(a) = v(b) = 1 failed".into()));
    }
    let a1 = a.shift_down(1)?;
    let b1 = b.shift_down(1)?;
    let (alpha, beta) = roots(k)?;
    let alpha_r = alpha.pow(r as u64);
    let beta_r = beta.pow(r as u64);
    // beyond m_max every a^m / m! has valuation >= precision
    let mut m_max = k_max;
    while tail_bound(m_max as u64 + 1) < k as u64 {
        m_max += 1;
    }
    let stirling = stirling_first(m_max);
    let mut coeffs = vec![PadicInt::zero(k); k_max + 1];
    let mut factorial = BigUint::one();
    for m in 0..=m_max {
        if m > 0 {
            factorial *= m as u64;
        }
        // a^m / m! = 7^(m - v(m!)) (a/7)^m / (unit part of m!)
        let v_fact: u32 = (1..=m as u64).map(val_u64).sum();
        let unit = PadicInt::new(&factorial / seven_pow(v_fact), k);
        let shift = m as u32 - v_fact;
        let term = alpha_r.mul(&a1.pow(m as u64)).sub(&beta_r.mul(&b1.pow(m as u64))).mul(&unit.inv()?).shift_up(shift);
        for (j, c) in coeffs.iter_mut().enumerate().take(m.min(k_max) + 1) {
            *c = c.add(&term.mul_int(&stirling[m][j]));
        }
    }
    coeffs[0] = coeffs[0].sub(&alpha.sub(&beta));
    if !coeffs[0].is_zero_to_precision() {
        return Err(Error::Indeterminate(format!("c_0 = {:?} is not zero", coeffs[0])));
    }
    for (j, c) in coeffs.iter().enumerate().skip(1) {
        let bound = tail_bound(j as u64).min(k as u64) as u32;
        if c.valuation() < bound {
            return Err(Error::Indeterminate(format!("tail bound violated at k = {j}")));
        }
    }
    Ok(SeriesCoefficients {
        r,
        precision: k,
        coeffs,
        tail_bound: "v(c_k) >= ceil((5k+1)/6), from v(a) = v(b) = 1 and v(m!) <= (m-1)/6".into(),
    })
}

impl SeriesCoefficients {
    pub fn valuations(&self) -> Vec<u32> {
        self.coeffs.iter().map(PadicInt::valuation).collect()
    }

    /// The truncated series at an integer point.
    pub fn evaluate(&self, s: i64) -> PadicInt {
        let x = PadicInt::from_i64(s, self.precision);
        let mut acc = PadicInt::zero(self.precision);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    /// For each `k >= 1`, whether `c_k = alpha^r a^k - beta^r b^k` modulo
    /// `7^(k+1)`, for `k + 1 <= precision`.
    pub fn leading_term_congruence(&self) -> Result<Vec<(usize, bool)>> {
        let k = self.precision;
        let (a, b) = unit_powers_minus_one(k)?;
        let (alpha, beta) = roots(k)?;
        let (ar, br) = (alpha.pow(self.r as u64), beta.pow(self.r as u64));
        Ok((1..self.coeffs.len())
            .filter(|&j| j as u32 + 1 <= k)
            .map(|j| {
                let approx =
                    ar.mul(&a.with_precision(k).pow(j as u64)).sub(&br.mul(&b.with_precision(k).pow(j as u64)));
                let m = j as u32 + 1;
                (j, self.coeffs[j].residue_mod(m) == approx.residue_mod(m))
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrassmannCertificate {
    pub r: u32,
    pub precision: u32,
    pub mu: u32,
    /// Largest index attaining `mu`; bounds the number of zeros in `Z_7`.
    pub n: usize,
    pub prefix_valuations: Vec<u32>,
    pub tail_bound: String,
    /// Every `k` from here on has `v(c_k) > mu` by the tail bound.
    pub tail_threshold: usize,
    pub conclusion: String,
}

pub fn strassmann_bound(series: &SeriesCoefficients) -> Result<StrassmannCertificate> {
    let vals = series.valuations();
    let prec = series.precision;
    let mu = vals.iter().skip(1).copied().min().unwrap_or(prec);
    if mu >= prec {
        return Err(Error::Indeterminate(format!("all coefficients vanish modulo 7^{prec}; raise the precision")));
    }
    let n = (1..vals.len()).rev().find(|&j| vals[j] == mu).expect("mu is attained");
    let tail_threshold = vals.len();
    if tail_bound(tail_threshold as u64) <= mu as u64 {
        return Err(Error::Indeterminate(format!(
            "tail bound at k = {tail_threshold} does not exceed mu = {mu}; raise k_max"
        )));
    }
    Ok(StrassmannCertificate {
        r: series.r,
        precision: prec,
        mu,
        n,
        prefix_valuations: vals,
        tail_bound: series.tail_bound.clone(),
        tail_threshold,
        conclusion: format!("g_{} has at most {n} zeros in Z_7", series.r),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitCertificate {
    pub certified: bool,
    pub solutions: Vec<u64>,
    pub residues: Vec<u32>,
    pub certificates: Vec<StrassmannCertificate>,
    /// `(r, s)` with `u_{r + 6s} = 1` exhibited by exact evaluation.
    pub exhibited: Vec<(u32, u64)>,
    pub n_check: usize,
    pub scan_solutions: Vec<usize>,
    pub reason: Option<String>,
}

/// `u_n = 1` exactly for `n` in the returned set, for all `n >= 0`.
pub fn certify_un_equals_one(precision: u32, k_max: usize, n_check: usize) -> Result<UnitCertificate> {
    let table = recurrence_tables(n_check.max(7))?;
    let residues = residue_filter(1);
    let mut certificates = Vec::new();
    let mut exhibited = Vec::new();
    let mut reason = None;
    for &r in &residues {
        let cert = strassmann_bound(&series_coefficients(r, precision, k_max)?)?;
        let found: Vec<(u32, u64)> = (0..=cert.n as u64)
            .filter(|s| table.u.get(r as usize + 6 * *s as usize).is_some_and(BigInt::is_one))
            .map(|s| (r, s))
            .collect();
        if found.len() != cert.n {
            reason = Some(format!("r = {r}: bound {} but {} zeros exhibited", cert.n, found.len()));
        }
        exhibited.extend(found);
        certificates.push(cert);
    }
    let mut solutions: Vec<u64> = exhibited.iter().map(|&(r, s)| r as u64 + 6 * s).collect();
    solutions.sort_unstable();
    let scan_solutions = table.indices_with_u(1).into_iter().filter(|&n| n <= n_check).collect::<Vec<_>>();
    let scan_match = scan_solutions.iter().map(|&n| n as u64).eq(solutions.iter().copied());
    if reason.is_none() && !scan_match {
        reason = Some("certified set disagrees with the exact scan".into());
    }
    if reason.is_none() && residues != [1, 2] {
        reason = Some(format!("unexpected residue classes {residues:?}"));
    }
    Ok(UnitCertificate {
        certified: reason.is_none(),
        solutions,
        residues,
        certificates,
        exhibited,
        n_check,
        scan_solutions,
        reason,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiophantineSolution {
    pub x: BigInt,
    pub n: usize,
    /// `x = isqrt(4 * 5^n)`, so `F_{5^n}` has discriminant -19.
    pub is_floor_sqrt: bool,
}

/// Solutions of `x^2 + 19 = 4 * 5^n` with `x > 0`, `n <= n_max`.
pub fn solve_diophantine(n_max: usize) -> Result<Vec<DiophantineSolution>> {
    if n_max < 7 {
        return Err(Error::InvalidArgument("n_max must be at least 7".into()));
    }
    let table = recurrence_tables(n_max)?;
    let mut out = Vec::new();
    for n in 0..=n_max {
        if table.u[n].abs().is_one() {
            let x = table.v[n].abs();
            let rhs = BigInt::from(4) * BigInt::from(5).pow(n as u32);
            if &x * &x + BigInt::from(19) != rhs {
                return Err(Error::Indeterminate(format!("substitution failed at n = {n}")));
            }
            let is_floor_sqrt = rhs.sqrt() == x;
            out.push(DiophantineSolution { x, n, is_floor_sqrt });
        }
    }
    Ok(out)
}

impl DiophantineSolution {
    pub fn x_u64(&self) -> Option<u64> {
        self.x.to_u64()
    }
}
