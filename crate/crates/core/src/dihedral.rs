//! The `D_5` generators acting on `P^2` and `P^4`, and the invariance and
//! stability checks for the curve models.
//!
//! Matrices act on coordinate vectors, and a polynomial `F` is transformed
//! to `F o g : x -> F(g x)`. On `V = <Q_1, Q_2, Q_3>` the induced matrix has
//! `T[i][j]` = coefficient of `Q_j` in `Q_i o g`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{QuadricCase, QuadricSystem, QuinticModel};
use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Fq, Matrix, Solution};
use crate::group::{group_report, GroupReport};
use crate::mpoly::{monomials_of_degree, MPoly};

fn require_q_one_mod_five(f: &FieldSpec) -> Result<Fq> {
    if f.q() % 5 != 1 {
        return Err(Error::NoRootOfUnity { k: 5, q: f.q() });
    }
    f.primitive_root_of_unity(5)
}

/// Smallest `k <= max` with `m^k` a scalar matrix.
pub fn projective_order(f: &FieldSpec, m: &Matrix, max: u64) -> Option<u64> {
    let id = Matrix::identity(m.rows());
    let mut p = m.clone();
    for k in 1..=max {
        if p.scalar_ratio(f, &id).is_some() {
            return Some(k);
        }
        p = p.mul(f, m).ok()?;
    }
    None
}

/// `phi: [X:Y:Z] -> [X : zeta^n Y : zeta^m Z]` and the matching involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanePair {
    pub m: u32,
    pub n: u32,
    pub sign: i8,
    pub zeta: Fq,
    pub phi: Matrix,
    pub sigma: Matrix,
}

pub fn build_plane_generators(f: &FieldSpec, m: u32, n: u32, sign: i8) -> Result<PlanePair> {
    if !(1..=4).contains(&m) || !(1..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!("exponents must lie in 1..=4, got m={m}, n={n}")));
    }
    if m == n {
        return Err(Error::InvalidArgument("m = n does not give a generator of order 5".into()));
    }
    if (m + n) % 5 != 0 {
        return Err(Error::InvalidArgument(format!("m + n = {} is not divisible by 5", m + n)));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {sign}")));
    }
    let zeta = require_q_one_mod_five(f)?;
    let zm = f.pow(zeta, m as u128);
    let zn = f.pow(zeta, n as u128);
    let phi = Matrix::diagonal(&[Fq::ONE, zn, zm]);
    let mut sigma = Matrix::zeros(3, 3);
    sigma[(0, 0)] = f.from_int(sign as i64);
    sigma[(1, 2)] = zm;
    sigma[(2, 1)] = zn;
    let pair = PlanePair { m, n, sign, zeta, phi, sigma };
    debug_assert_eq!(projective_order(f, &pair.phi, 10), Some(5));
    debug_assert_eq!(projective_order(f, &pair.sigma, 10), Some(2));
    Ok(pair)
}

/// True iff `F o g` is a scalar multiple of `F` for both generators.
pub fn polynomial_invariant(f: &FieldSpec, poly: &MPoly, pair: &PlanePair) -> bool {
    [&pair.phi, &pair.sigma].iter().all(|g| poly.substitute_linear(f, g).projective_ratio(f, poly).is_some())
}

pub fn check_quintic_invariance(model: &QuinticModel, pair: &PlanePair) -> bool {
    polynomial_invariant(model.spec(), &model.polynomial(), pair)
}

/// Which signs of the involution preserve the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignReport {
    pub plus: bool,
    pub minus: bool,
}

impl SignReport {
    pub fn preserving_sign(&self) -> Option<i8> {
        if self.plus {
            Some(1)
        } else if self.minus {
            Some(-1)
        } else {
            None
        }
    }
}

pub fn quintic_sign_check(model: &QuinticModel, m: u32, n: u32) -> Result<SignReport> {
    let f = model.spec();
    Ok(SignReport {
        plus: check_quintic_invariance(model, &build_plane_generators(f, m, n, 1)?),
        minus: check_quintic_invariance(model, &build_plane_generators(f, m, n, -1)?),
    })
}

/// `Rbar = diag(zeta^3, zeta^4, zeta^2, zeta, 1)` and
/// `Sbar: (X, Y, Z, U, V) -> (zeta^2 Z, zeta U, zeta^3 X, zeta^4 Y, V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceGenerators {
    pub zeta: Fq,
    pub rbar: Matrix,
    pub sbar: Matrix,
}

pub fn build_p4_generators(f: &FieldSpec) -> Result<SpaceGenerators> {
    let zeta = require_q_one_mod_five(f)?;
    let z = |k: u128| f.pow(zeta, k);
    let rbar = Matrix::diagonal(&[z(3), z(4), z(2), z(1), Fq::ONE]);
    let mut sbar = Matrix::zeros(5, 5);
    sbar[(0, 2)] = z(2);
    sbar[(1, 3)] = z(1);
    sbar[(2, 0)] = z(3);
    sbar[(3, 1)] = z(4);
    sbar[(4, 4)] = Fq::ONE;
    let gens = SpaceGenerators { zeta, rbar, sbar };
    debug_assert!(gens.exact_relations(f));
    Ok(gens)
}

impl SpaceGenerators {
    /// `Rbar^5 = I`, `Sbar^2 = I` and `Rbar Sbar Rbar = Sbar` as matrices.
    pub fn exact_relations(&self, f: &FieldSpec) -> bool {
        let id = Matrix::identity(5);
        let rsr = self.rbar.mul(f, &self.sbar).and_then(|m| m.mul(f, &self.rbar));
        self.rbar.pow(f, 5).ok() == Some(id.clone())
            && self.sbar.pow(f, 2).ok() == Some(id)
            && rsr.ok() == Some(self.sbar.clone())
    }
}

/// Induced action of `Rbar`, `Sbar` on `V = <Q_1, Q_2, Q_3>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildePair {
    pub case: QuadricCase,
    pub tilde_r: Matrix,
    pub tilde_s: Matrix,
    /// `tilde_r` is a scalar multiple of `diag(1, zeta, zeta^4)` (case 1) or
    /// `diag(1, zeta^2, zeta^3)` (case 2).
    pub r_shape: bool,
    /// `tilde_s` has the printed shape up to scalar and basis rescaling:
    /// `[[c, 0, 0], [0, 0, s], [0, t, 0]]` with `s t = c^2`.
    pub s_shape: bool,
    /// `tilde_s` is a scalar multiple of `[[+-1, 0, 0], [0, 0, zeta^k],
    /// [0, zeta^(5-k), 0]]` with `k = 4` (case 1) or `k = 3` (case 2).
    pub exact_printed_form: bool,
}

impl TildePair {
    pub fn shapes_match(&self) -> bool {
        self.r_shape && self.s_shape
    }
}

/// `Q o g` expressed in the basis `Q_1, Q_2, Q_3`, if it stays in the span.
fn induced_matrix(f: &FieldSpec, quadrics: &[MPoly; 3], coeffs_t: &Matrix, g: &Matrix) -> Result<Option<Matrix>> {
    let basis = monomials_of_degree(5, 2);
    let mut rows = Vec::with_capacity(3);
    for q in quadrics {
        let image = q.substitute_linear(f, g).coefficient_vector(&basis).expect("linear substitution preserves degree");
        match coeffs_t.solve(f, &image)? {
            Solution::Consistent { particular, .. } => rows.push(particular),
            Solution::Inconsistent => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_rows(rows)?))
}

pub fn check_span_stability(
    f: &FieldSpec,
    system: &QuadricSystem,
    gens: &SpaceGenerators,
) -> Result<Option<TildePair>> {
    let coeffs = system.coefficient_matrix(f);
    let rank = coeffs.rank(f);
    if rank < 3 {
        return Err(Error::DependentQuadrics { rank });
    }
    let coeffs_t = coeffs.transpose();
    let quadrics = system.quadrics(f);
    let Some(tilde_r) = induced_matrix(f, &quadrics, &coeffs_t, &gens.rbar)? else {
        return Ok(None);
    };
    let Some(tilde_s) = induced_matrix(f, &quadrics, &coeffs_t, &gens.sbar)? else {
        return Ok(None);
    };
    let z = |k: u128| f.pow(gens.zeta, k);
    let (k1, k2) = match system.case {
        QuadricCase::One => (1, 4),
        QuadricCase::Two => (2, 3),
    };
    let r_shape = tilde_r.scalar_ratio(f, &Matrix::diagonal(&[Fq::ONE, z(k1), z(k2)])).is_some();
    let t = &tilde_s;
    let zero_pattern = [(0, 1), (0, 2), (1, 0), (2, 0), (1, 1), (2, 2)].iter().all(|&ij| t[ij].is_zero());
    let s_shape = zero_pattern && !t[(0, 0)].is_zero() && f.mul(t[(1, 2)], t[(2, 1)]) == f.square(t[(0, 0)]);
    let exact_printed_form = [1i64, -1].iter().any(|&sign| {
        let mut printed = Matrix::zeros(3, 3);
        printed[(0, 0)] = f.from_int(sign);
        printed[(1, 2)] = z(k2);
        printed[(2, 1)] = z(5 - k2);
        t.scalar_ratio(f, &printed).is_some()
    });
    Ok(Some(TildePair { case: system.case, tilde_r, tilde_s, r_shape, s_shape, exact_printed_form }))
}

/// Random system from the `Sbar`-compatible part of a case: `a1..a6`
/// uniform, `(a7, a8, a9) = c (a4, a5, a6)` in case 1 and
/// `c (a5, a4, a6)` in case 2 with `c != 0`; redrawn until the quadrics are
/// independent.
pub fn sample_stable_system<R: Rng>(f: &FieldSpec, case: QuadricCase, rng: &mut R) -> QuadricSystem {
    loop {
        let mut a = [0u64; 9];
        for slot in a.iter_mut().take(6) {
            *slot = rng.random_range(0..f.q());
        }
        let c = Fq(rng.random_range(1..f.q()));
        let partner = match case {
            QuadricCase::One => [a[3], a[4], a[5]],
            QuadricCase::Two => [a[4], a[3], a[5]],
        };
        for (k, &v) in partner.iter().enumerate() {
            a[6 + k] = f.mul(c, Fq(v)).0;
        }
        let system = QuadricSystem::new(f, case, &a).expect("coefficients are field elements");
        if system.coefficient_matrix(f).rank(f) == 3 {
            return system;
        }
    }
}

/// Closure of matrix generators, with equality exact or up to scalars.
pub fn group_relations(f: &FieldSpec, gens: &[Matrix], max_order: usize, projective: bool) -> Result<GroupReport> {
    let n = gens.first().map_or(0, Matrix::rows);
    if gens.iter().any(|g| g.rows() != n || g.cols() != n) {
        return Err(Error::InvalidArgument("generators must be square of equal size".into()));
    }
    let norm = |m: Matrix| if projective { m.normalized_projective(f) } else { m };
    let gens: Vec<Matrix> = gens.iter().cloned().map(norm).collect();
    group_report(
        &gens,
        Matrix::identity(n),
        |a, b| norm(a.mul(f, b).expect("square matrices of equal size")),
        max_order,
    )
}
