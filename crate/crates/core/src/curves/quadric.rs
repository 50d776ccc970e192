//! Complete intersections of three quadrics in `P^4`.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProjectiveSpace;
use crate::arith::{hws_bound, multiplicative_order_mod, PrimePower};
use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Fq, Matrix};
use crate::mpoly::{monomials_of_degree, MPoly};

pub const DEFAULT_P4_BUDGET: u128 = 1 << 32;

/// Which of the two dihedral-invariant shapes a system has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum QuadricCase {
    One,
    Two,
}

impl TryFrom<u8> for QuadricCase {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(QuadricCase::One),
            2 => Ok(QuadricCase::Two),
            _ => Err(Error::InvalidArgument(format!("case must be 1 or 2, got {v}"))),
        }
    }
}

impl From<QuadricCase> for u8 {
    fn from(c: QuadricCase) -> u8 {
        match c {
            QuadricCase::One => 1,
            QuadricCase::Two => 2,
        }
    }
}

/// Variable indices `X, Y, Z, U, V = 0..5`. Entry `[i][k]` is the monomial
/// multiplying `a_{3i+k+1}` in `Q_{i+1}`.
type Support = [[(usize, usize); 3]; 3];

const CASE_ONE: Support = [
    [(0, 2), (1, 3), (4, 4)], // a1 XZ + a2 YU + a3 V^2
    [(1, 2), (3, 4), (0, 0)], // a4 YZ + a5 UV + a6 X^2
    [(0, 3), (1, 4), (2, 2)], // a7 XU + a8 YV + a9 Z^2
];

const CASE_TWO: Support = [
    [(0, 2), (1, 3), (4, 4)], // a1 XZ + a2 YU + a3 V^2
    [(0, 1), (2, 4), (3, 3)], // a4 XY + a5 ZV + a6 U^2
    [(0, 4), (2, 3), (1, 1)], // a7 XV + a8 ZU + a9 Y^2
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadricSystem {
    pub case: QuadricCase,
    pub coeffs: [Fq; 9],
}

impl QuadricSystem {
    pub fn new(f: &FieldSpec, case: QuadricCase, coeffs: &[u64]) -> Result<Self> {
        if coeffs.len() != 9 {
            return Err(Error::InvalidArgument(format!("expected 9 coefficients, got {}", coeffs.len())));
        }
        let mut a = [Fq::ZERO; 9];
        for (slot, &c) in a.iter_mut().zip(coeffs) {
            *slot = f.element(c)?;
        }
        Ok(QuadricSystem { case, coeffs: a })
    }

    fn support(&self) -> &'static Support {
        match self.case {
            QuadricCase::One => &CASE_ONE,
            QuadricCase::Two => &CASE_TWO,
        }
    }

    pub fn quadrics(&self, f: &FieldSpec) -> [MPoly; 3] {
        std::array::from_fn(|i| {
            let terms: Vec<(Fq, [u8; 5])> = self.support()[i]
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| {
                    let mut e = [0u8; 5];
                    e[a] += 1;
                    e[b] += 1;
                    (self.coeffs[3 * i + k], e)
                })
                .collect();
            MPoly::from_terms(f, 5, &terms)
        })
    }

    /// Rows are `Q_1, Q_2, Q_3` in the 15-monomial quadric basis.
    pub fn coefficient_matrix(&self, f: &FieldSpec) -> Matrix {
        let basis = monomials_of_degree(5, 2);
        let rows = self
            .quadrics(f)
            .iter()
            .map(|q| q.coefficient_vector(&basis).expect("quadrics are homogeneous of degree 2"))
            .collect();
        Matrix::from_rows(rows).expect("three rows of length 15")
    }

    #[inline]
    fn vanishes_at(&self, f: &FieldSpec, x: &[Fq]) -> bool {
        let sup = self.support();
        (0..3).all(|i| {
            let v = (0..3).fold(Fq::ZERO, |acc, k| {
                let (a, b) = sup[i][k];
                f.add(acc, f.mul(self.coeffs[3 * i + k], f.mul(x[a], x[b])))
            });
            v.is_zero()
        })
    }
}

/// Points of `P^4(F_q)` with index in `range` where all three quadrics
/// vanish.
pub fn count_p4_range(f: &FieldSpec, system: &QuadricSystem, range: Range<u128>) -> u64 {
    let space = ProjectiveSpace::new(f.q(), 5);
    let mut n = 0;
    let mut x = [Fq::ZERO; 5];
    space.for_each_in(range, |c| {
        for (xi, &ci) in x.iter_mut().zip(c) {
            *xi = Fq(ci);
        }
        if system.vanishes_at(f, &x) {
            n += 1;
        }
    });
    n
}

/// Number of points of `P^4(F_q)` on `Q_1 = Q_2 = Q_3 = 0`.
pub fn count_p4_points(f: &FieldSpec, system: &QuadricSystem, budget: u128) -> Result<u64> {
    let space = ProjectiveSpace::new(f.q(), 5);
    if space.len() > budget {
        return Err(Error::BudgetExceeded { needed: space.len(), budget });
    }
    Ok(count_p4_range(f, system, 0..space.len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricCandidate {
    pub coeffs: Vec<u64>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricSearchReport {
    pub q: u64,
    pub case: QuadricCase,
    pub samples: u64,
    pub seed: u64,
    pub n_max: u64,
    pub max_count: Option<u64>,
    /// Systems whose point count equals `n_max`. Smoothness and genus are not
    /// certified; these need external verification.
    pub candidates: Vec<QuadricCandidate>,
}

/// Uniformly random coefficient tuples (ChaCha8 seeded by `seed`), keeping
/// those whose count equals the genus-5 bound.
pub fn quadric_random_search(
    f: &FieldSpec,
    case: QuadricCase,
    samples: u64,
    seed: u64,
    budget: u128,
) -> Result<QuadricSearchReport> {
    let pp = PrimePower::new(f.q())?;
    let n_max = hws_bound(&pp, 5).n_max as u64;
    let points = ProjectiveSpace::new(f.q(), 5).len();
    if samples > 0 && points > budget {
        return Err(Error::BudgetExceeded { needed: points, budget });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        QuadricSearchReport { q: f.q(), case, samples, seed, n_max, max_count: None, candidates: Vec::new() };
    for _ in 0..samples {
        let coeffs: Vec<u64> = (0..9).map(|_| rng.random_range(0..f.q())).collect();
        let system = QuadricSystem::new(f, case, &coeffs)?;
        let count = count_p4_range(f, &system, 0..points);
        report.max_count = Some(report.max_count.map_or(count, |m| m.max(count)));
        if count == n_max {
            report.candidates.push(QuadricCandidate { coeffs, count });
        }
    }
    Ok(report)
}

/// `P_1 = sum x_i^2`, `P_2 = xy + yz + zu + uv + xv`,
/// `P_3 = xz + yu + zv + xu + yv`.
fn invariant_triple(f: &FieldSpec) -> [MPoly; 3] {
    let quad = |pairs: &[(usize, usize)]| {
        let terms: Vec<(Fq, [u8; 5])> = pairs
            .iter()
            .map(|&(a, b)| {
                let mut e = [0u8; 5];
                e[a] += 1;
                e[b] += 1;
                (Fq::ONE, e)
            })
            .collect();
        MPoly::from_terms(f, 5, &terms)
    };
    [
        quad(&[(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]),
        quad(&[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
        quad(&[(0, 2), (1, 3), (2, 4), (0, 3), (1, 4)]),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub q: u64,
    /// Order of `q` modulo 5; the point lives over `F_{q^e}`.
    pub e: u64,
    pub extension_order: u64,
    /// Coefficient vector of `zeta` in `F_{q^e}`.
    pub zeta: Vec<u64>,
    pub vanishes: [bool; 3],
    pub jacobian_rank: usize,
    /// All three quadrics vanish and the Jacobian has rank at most 2.
    pub singular: bool,
}

/// Evaluates the invariant triple and its Jacobian at
/// `[1 : zeta : zeta^2 : zeta^3 : zeta^4]` over `F_{q^e}`.
pub fn invariant_triple_singularity(q: u64) -> Result<TripleRecord> {
    let pp = PrimePower::new(q)?;
    if pp.p == 5 {
        return Err(Error::InvalidArgument(format!("5 divides q = {q}")));
    }
    let e = multiplicative_order_mod(q % 5, 5).expect("q is prime to 5");
    let big = FieldSpec::new(pp.p, pp.r * e as u32)?;
    let zeta = big.primitive_root_of_unity(5)?;
    let point: Vec<Fq> = (0..5).map(|i| big.pow(zeta, i)).collect();
    let triple = invariant_triple(&big);
    let vanishes = std::array::from_fn(|i| triple[i].eval(&big, &point).is_zero());
    let jac = Matrix::from_rows(
        triple.iter().map(|p| (0..5).map(|j| p.partial(&big, j).eval(&big, &point)).collect()).collect(),
    )?;
    let jacobian_rank = jac.rank(&big);
    Ok(TripleRecord {
        q,
        e,
        extension_order: big.q(),
        zeta: big.coeffs(zeta),
        vanishes,
        jacobian_rank,
        singular: vanishes.iter().all(|&v| v) && jacobian_rank <= 2,
    })
}
