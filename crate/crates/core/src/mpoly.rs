//! Sparse multivariate polynomials over `F_q` in at most five variables.

use std::collections::BTreeMap;

use crate::ff::{FieldSpec, Fq, Matrix};

pub const MAX_VARS: usize = 5;

pub type Exponents = [u8; MAX_VARS];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Fq>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Fq) -> Self {
        Self::monomial(nvars, c, [0; MAX_VARS])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self::monomial(nvars, Fq::ONE, e)
    }

    pub fn monomial(nvars: usize, c: Fq, e: Exponents) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs.
    pub fn from_terms(f: &FieldSpec, nvars: usize, terms: &[(Fq, Exponents)]) -> Self {
        let mut p = Self::zero(nvars);
        for &(c, e) in terms {
            p.add_term(f, e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Fq)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponents) -> Fq {
        self.terms.get(e).copied().unwrap_or_default()
    }

    fn add_term(&mut self, f: &FieldSpec, e: Exponents, c: Fq) {
        let entry = self.terms.entry(e).or_insert(Fq::ZERO);
        *entry = f.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, f: &FieldSpec, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(f, e, c);
        }
        out
    }

    pub fn scale(&self, f: &FieldSpec, c: Fq) -> MPoly {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (&e, &a) in &self.terms {
            out.terms.insert(e, f.mul(a, c));
        }
        out
    }

    pub fn mul(&self, f: &FieldSpec, other: &MPoly) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let mut e = [0; MAX_VARS];
                for i in 0..MAX_VARS {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(f, e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, f: &FieldSpec, n: u32) -> MPoly {
        let mut acc = Self::constant(self.nvars, Fq::ONE);
        for _ in 0..n {
            acc = acc.mul(f, self);
        }
        acc
    }

    pub fn eval(&self, f: &FieldSpec, point: &[Fq]) -> Fq {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(Fq::ZERO, |acc, (e, &c)| {
            let m = (0..self.nvars).fold(c, |m, i| f.mul(m, f.pow(point[i], e[i] as u128)));
            f.add(acc, m)
        })
    }

    pub fn partial(&self, f: &FieldSpec, i: usize) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = *e;
            d[i] -= 1;
            out.add_term(f, d, f.mul(c, f.from_int(e[i] as i64)));
        }
        out
    }

    /// `x -> self(M x)`: variable `i` is replaced by `sum_j M[i][j] x_j`.
    pub fn substitute_linear(&self, f: &FieldSpec, m: &Matrix) -> MPoly {
        assert!(m.rows() == self.nvars && m.cols() == self.nvars);
        let images: Vec<MPoly> = (0..self.nvars)
            .map(|i| {
                let mut img = Self::zero(self.nvars);
                for j in 0..self.nvars {
                    img = img.add(f, &Self::var(self.nvars, j).scale(f, m[(i, j)]));
                }
                img
            })
            .collect();
        let mut out = Self::zero(self.nvars);
        for (e, &c) in &self.terms {
            let mut term = Self::constant(self.nvars, c);
            for i in 0..self.nvars {
                term = term.mul(f, &images[i].pow(f, e[i] as u32));
            }
            out = out.add(f, &term);
        }
        out
    }

    /// Some(c) with `self = c * other`, `c != 0`.
    pub fn projective_ratio(&self, f: &FieldSpec, other: &MPoly) -> Option<Fq> {
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (e, &b) = other.terms.iter().next()?;
        let c = f.div(self.coeff(e), b).ok()?;
        other.terms.iter().all(|(e, &b)| self.coeff(e) == f.mul(c, b)).then_some(c)
    }

    /// Coefficients in the given monomial basis, or `None` if a term falls
    /// outside it.
    pub fn coefficient_vector(&self, basis: &[Exponents]) -> Option<Vec<Fq>> {
        if self.terms.keys().any(|e| !basis.contains(e)) {
            return None;
        }
        Some(basis.iter().map(|e| self.coeff(e)).collect())
    }
}

/// Monomials of degree `d` in `nvars` variables, lexicographic with
/// `x_0` largest: for quadrics `x_i x_j`, `i <= j`, ordered by `(i, j)`.
pub fn monomials_of_degree(nvars: usize, d: u8) -> Vec<Exponents> {
    fn rec(nvars: usize, i: usize, left: u8, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == nvars - 1 {
            cur[i] = left;
            out.push(*cur);
            cur[i] = 0;
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(nvars, i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(nvars, 0, d, &mut [0; MAX_VARS], &mut out);
    out
}
