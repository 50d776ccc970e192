//! Dense univariate polynomials over `F_q`, low degree first.
//!
//! A polynomial is a trimmed `Vec<Fq>`: no trailing zeros, the zero
//! polynomial is empty.

use super::{FieldSpec, Fq};

pub fn trim(mut a: Vec<Fq>) -> Vec<Fq> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn degree(a: &[Fq]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn eval(f: &FieldSpec, a: &[Fq], x: Fq) -> Fq {
    a.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn add(f: &FieldSpec, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_default();
            let y = b.get(i).copied().unwrap_or_default();
            f.add(x, y)
        })
        .collect();
    trim(out)
}

pub fn sub(f: &FieldSpec, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let nb: Vec<Fq> = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul(f: &FieldSpec, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder. Panics if `b` is zero.
pub fn div_rem(f: &FieldSpec, a: &[Fq], b: &[Fq]) -> (Vec<Fq>, Vec<Fq>) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("leading coefficient is nonzero");
    let mut rem = trim(a.to_vec());
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quo = vec![Fq::ZERO; rem.len() - db];
    while rem.len() > db {
        let k = rem.len() - 1;
        let c = f.mul(rem[k], lead_inv);
        quo[k - db] = c;
        for j in 0..=db {
            rem[k - db + j] = f.sub(rem[k - db + j], f.mul(c, b[j]));
        }
        rem = trim(rem);
    }
    (trim(quo), rem)
}

pub fn rem(f: &FieldSpec, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    div_rem(f, a, b).1
}

pub fn monic(f: &FieldSpec, a: &[Fq]) -> Vec<Fq> {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => {
            let inv = f.inv(lead).expect("trimmed polynomial has nonzero lead");
            a.iter().map(|&c| f.mul(c, inv)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &FieldSpec, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn mul_mod(f: &FieldSpec, a: &[Fq], b: &[Fq], m: &[Fq]) -> Vec<Fq> {
    rem(f, &mul(f, a, b), m)
}

pub fn pow_mod(f: &FieldSpec, a: &[Fq], mut e: u128, m: &[Fq]) -> Vec<Fq> {
    let mut acc = rem(f, &[Fq::ONE], m);
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(f, &acc, &base, m);
        }
        base = mul_mod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

/// `x^(q^k) mod m`.
pub fn frobenius_x(f: &FieldSpec, k: u32, m: &[Fq]) -> Vec<Fq> {
    let mut h = rem(f, &[Fq::ZERO, Fq::ONE], m);
    for _ in 0..k {
        h = pow_mod(f, &h, f.q() as u128, m);
    }
    h
}

/// Ben-Or test: `m` is irreducible iff `gcd(x^(q^i) - x, m) = 1` for
/// `1 <= i <= deg(m)/2`.
pub fn is_irreducible(f: &FieldSpec, m: &[Fq]) -> bool {
    let m = trim(m.to_vec());
    let Some(d) = degree(&m) else { return false };
    if d == 0 {
        return false;
    }
    if d > 1 && m[0].is_zero() {
        return false;
    }
    let x = [Fq::ZERO, Fq::ONE];
    let mut h = rem(f, &x, &m);
    for _ in 1..=d / 2 {
        h = pow_mod(f, &h, f.q() as u128, &m);
        let g = gcd(f, &sub(f, &h, &x), &m);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `r` over the
/// prime field `f`, comparing `(c_0, c_1, .., c_{r-1})`.
pub fn smallest_irreducible(f: &FieldSpec, r: usize) -> Vec<u64> {
    let p = f.p();
    // digits[0] is c_0, the most significant position of the ordering
    let mut digits = vec![0u64; r];
    digits[0] = 1;
    loop {
        let mut cand: Vec<Fq> = digits.iter().map(|&c| Fq(c)).collect();
        cand.push(Fq::ONE);
        if is_irreducible(f, &cand) {
            let mut out = digits.clone();
            out.push(1);
            return out;
        }
        let mut i = r - 1;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "irreducible polynomials exist in every degree");
            i -= 1;
        }
    }
}

/// Number of distinct roots of `g` in `F_{q^e}`.
pub fn distinct_roots_in_extension(f: &FieldSpec, g: &[Fq], e: u32) -> usize {
    let g = trim(g.to_vec());
    match degree(&g) {
        None => panic!("the zero polynomial has every element as a root"),
        Some(0) => return 0,
        _ => {}
    }
    let h = frobenius_x(f, e, &g);
    let common = gcd(f, &sub(f, &h, &[Fq::ZERO, Fq::ONE]), &g);
    degree(&common).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_irreducibles_of_small_degree() {
        // necklace formula: (1/n) sum_{d|n} mu(d) p^(n/d)
        let f = FieldSpec::prime(3).unwrap();
        let mut count = [0usize; 5];
        for n in 1..=4usize {
            let total = 3u64.pow(n as u32);
            for code in 0..total {
                let mut m: Vec<Fq> = (0..n).map(|i| Fq(code / 3u64.pow(i as u32) % 3)).collect();
                m.push(Fq::ONE);
                if is_irreducible(&f, &m) {
                    count[n] += 1;
                }
            }
        }
        assert_eq!(&count[1..], &[3, 3, 8, 18]);
    }

    #[test]
    fn root_count_matches_enumeration() {
        let f = FieldSpec::prime(7).unwrap();
        let (big, _) = f.extension(2).unwrap();
        // (x^2 + 1)(x - 3)(x - 3) = roots: 3 in F_7, +-i in F_49
        let g = mul(&f, &mul(&f, &[Fq(1), Fq(0), Fq(1)], &[Fq(4), Fq(1)]), &[Fq(4), Fq(1)]);
        assert_eq!(distinct_roots_in_extension(&f, &g, 1), 1);
        assert_eq!(distinct_roots_in_extension(&f, &g, 2), 3);
        let enumerated = big.elements().filter(|&x| eval(&big, &g, x).is_zero()).count();
        assert_eq!(enumerated, 3);
    }

    #[test]
    fn division_identity() {
        let f = FieldSpec::new(5, 2).unwrap();
        let a: Vec<Fq> = (0..9).map(|i| Fq((i * 7 + 3) % 25)).collect();
        let b: Vec<Fq> = vec![Fq(2), Fq(11), Fq(1), Fq(19)];
        let (qt, r) = div_rem(&f, &a, &b);
        assert!(r.len() < b.len());
        assert_eq!(add(&f, &mul(&f, &qt, &b), &r), trim(a));
    }
}
