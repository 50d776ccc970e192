//! Arithmetic in `O_K = Z[gamma]`, `gamma^2 = gamma - 5`, and the rank-5
//! Hermitian lattice data `H_1`, `R`, `S` together with their reductions
//! modulo a split prime.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Fq, Matrix};
use crate::group::{group_report, GroupReport};

/// `a + b gamma`. Serializes as `[a, b]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[JsonInt; 2]", try_from = "[JsonInt; 2]")]
pub struct OKElement {
    pub a: BigInt,
    pub b: BigInt,
}

/// Integer as a JSON number when it fits in `i64`, else a decimal string.
#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<BigInt> for JsonInt {
    fn from(x: BigInt) -> Self {
        x.to_i64().map_or_else(|| JsonInt::Big(x.to_string()), JsonInt::Small)
    }
}

impl TryFrom<JsonInt> for BigInt {
    type Error = String;

    fn try_from(x: JsonInt) -> std::result::Result<Self, String> {
        match x {
            JsonInt::Small(v) => Ok(v.into()),
            JsonInt::Big(s) => s.parse().map_err(|_| format!("invalid integer {s:?}")),
        }
    }
}

impl From<OKElement> for [JsonInt; 2] {
    fn from(x: OKElement) -> Self {
        [x.a.into(), x.b.into()]
    }
}

impl TryFrom<[JsonInt; 2]> for OKElement {
    type Error = String;

    fn try_from([a, b]: [JsonInt; 2]) -> std::result::Result<Self, String> {
        Ok(OKElement { a: a.try_into()?, b: b.try_into()? })
    }
}

impl fmt::Debug for OKElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}g", self.a, self.b)
    }
}

impl OKElement {
    pub fn new(a: i64, b: i64) -> Self {
        OKElement { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn gamma() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        OKElement { a: &self.a + &o.a, b: &self.b + &o.b }
    }

    pub fn neg(&self) -> Self {
        OKElement { a: -&self.a, b: -&self.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// `(a + b g)(c + d g) = ac - 5bd + (ad + bc + bd) g`.
    pub fn mul(&self, o: &Self) -> Self {
        let bd = &self.b * &o.b;
        OKElement { a: &self.a * &o.a - BigInt::from(5) * &bd, b: &self.a * &o.b + &self.b * &o.a + bd }
    }

    /// `gamma -> 1 - gamma`.
    pub fn conj(&self) -> Self {
        OKElement { a: &self.a + &self.b, b: -&self.b }
    }

    /// `a^2 + ab + 5b^2`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b + BigInt::from(5) * &self.b * &self.b
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Image under `gamma -> g` in `F_q`.
    pub fn reduce(&self, f: &FieldSpec, g: Fq) -> Fq {
        let p = BigInt::from(f.p());
        let small = |x: &BigInt| f.from_int(x.mod_floor(&p).to_i64().expect("reduced below p"));
        f.add(small(&self.a), f.mul(small(&self.b), g))
    }
}

/// Square matrix over `O_K`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OKMatrix {
    n: usize,
    entries: Vec<OKElement>,
}

impl fmt::Debug for OKMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl OKMatrix {
    pub fn from_pairs(rows: &[[(i64, i64); 5]]) -> Self {
        let entries = rows.iter().flatten().map(|&(a, b)| OKElement::new(a, b)).collect();
        OKMatrix { n: rows.len(), entries }
    }

    pub fn from_rows(rows: Vec<Vec<OKElement>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("O_K matrix must be square".into()));
        }
        Ok(OKMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = OKMatrix { n, entries: vec![OKElement::zero(); n * n] };
        for i in 0..n {
            m.entries[i * n + i] = OKElement::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &OKElement {
        &self.entries[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<OKElement>> {
        self.entries.chunks(self.n).map(<[OKElement]>::to_vec).collect()
    }

    fn map(&self, f: impl Fn(&OKElement) -> OKElement) -> Self {
        OKMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(OKElement::neg)
    }

    pub fn scale(&self, c: &OKElement) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        OKMatrix { n, entries: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map(OKElement::conj)
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().conj()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        OKMatrix { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = OKElement::zero();
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(o.get(k, j)));
                }
                entries.push(acc);
            }
        }
        OKMatrix { n, entries }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn trace(&self) -> OKElement {
        (0..self.n).fold(OKElement::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> OKElement {
        fn minor(m: &OKMatrix, skip: usize) -> OKMatrix {
            let n = m.n;
            let entries = (1..n)
                .flat_map(|i| (0..n).filter(move |&j| j != skip).map(move |j| (i, j)))
                .map(|(i, j)| m.get(i, j).clone())
                .collect();
            OKMatrix { n: n - 1, entries }
        }
        match self.n {
            0 => OKElement::one(),
            1 => self.get(0, 0).clone(),
            _ => (0..self.n).fold(OKElement::zero(), |acc, j| {
                let term = self.get(0, j).mul(&minor(self, j).det());
                if j % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                }
            }),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.conj_transpose()
    }

    pub fn reduce(&self, f: &FieldSpec, g: Fq) -> Matrix {
        let rows = self.to_rows().iter().map(|r| r.iter().map(|x| x.reduce(f, g)).collect()).collect();
        Matrix::from_rows(rows).expect("square")
    }
}

/// Printed lower-triangular data of `H_1`, entries `(a, b)` for `a + b gamma`.
pub const H1_LOWER: [[(i64, i64); 5]; 5] = [
    [(3, 0), (0, 0), (0, 0), (0, 0), (0, 0)],
    [(0, 1), (3, 0), (0, 0), (0, 0), (0, 0)],
    [(0, 0), (-1, 0), (3, 0), (0, 0), (0, 0)],
    [(-1, 0), (0, 0), (1, 0), (4, 0), (0, 0)],
    [(1, -1), (0, -1), (-1, 1), (1, 1), (5, 0)],
];

pub const R_DATA: [[(i64, i64); 5]; 5] = [
    [(-1, -1), (-7, 3), (0, -2), (4, 0), (0, 0)],
    [(1, 1), (1, 2), (-2, 0), (0, 0), (4, 0)],
    [(-2, 1), (-8, 4), (-1, -2), (2, 0), (2, 2)],
    [(4, -1), (-6, -1), (4, -1), (1, 2), (2, -1)],
    [(0, 0), (6, 0), (-2, 1), (0, -1), (0, -1)],
];

pub const S_DATA: [[(i64, i64); 5]; 5] = [
    [(-1, 0), (-1, -1), (2, 0), (0, 0), (0, 0)],
    [(0, 0), (1, 0), (0, 0), (0, 0), (0, 0)],
    [(0, 0), (0, 0), (1, 0), (0, 0), (0, 0)],
    [(0, 0), (3, -1), (0, 1), (0, 0), (1, 0)],
    [(0, 0), (-3, 1), (0, -1), (1, 0), (0, 0)],
];

/// SHA-256 of the three constant tables in row-major `a,b;` text form.
pub const LATTICE_SHA256: &str = "3f997aa94e8519f1623b6c8dff5a93a5be5188870e73e0bdc95c51e2ece42d10";

pub fn lattice_checksum() -> String {
    let mut h = Sha256::new();
    for table in [&H1_LOWER, &R_DATA, &S_DATA] {
        for &(a, b) in table.iter().flatten() {
            h.update(format!("{a},{b};"));
        }
        h.update(b"|");
    }
    hex::encode(h.finalize())
}

/// How the printed `H_1` display is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H1Reading {
    /// Lower triangle `L`, completed to `L + conj(L)^T - diag(L)`.
    LowerCompletion,
    /// The display taken as the full Gram matrix.
    Raw,
}

/// A Gram matrix with the reading that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub reading: H1Reading,
    pub h: OKMatrix,
}

impl GramMatrix {
    pub fn from_reading(reading: H1Reading) -> Self {
        let l = OKMatrix::from_pairs(&H1_LOWER);
        let h = match reading {
            H1Reading::Raw => l,
            H1Reading::LowerCompletion => {
                let mut h = l.add(&l.conj_transpose());
                for i in 0..5 {
                    h.entries[i * 5 + i] = l.get(i, i).clone();
                }
                h
            }
        };
        GramMatrix { reading, h }
    }

    pub fn diagonal(&self) -> Vec<OKElement> {
        (0..self.h.size()).map(|i| self.h.get(i, i).clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeData {
    pub h1: GramMatrix,
    pub r: OKMatrix,
    pub s: OKMatrix,
}

/// The constants with `H_1` under the lower-triangle completion.
pub fn load_lattice_data() -> LatticeData {
    let h1 = GramMatrix::from_reading(H1Reading::LowerCompletion);
    assert!(h1.h.is_hermitian(), "completed H_1 must be Hermitian");
    assert!(h1.diagonal().iter().all(OKElement::is_rational));
    LatticeData { h1, r: OKMatrix::from_pairs(&R_DATA), s: OKMatrix::from_pairs(&S_DATA) }
}

/// Where the conjugation sits in the isometry condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryConvention {
    /// `conj(U)^T H U = H`.
    ConjTransposeLeft,
    /// `U^T H conj(U) = H`.
    TransposeLeft,
}

pub fn isometry_check_with(u: &OKMatrix, h: &GramMatrix, convention: IsometryConvention) -> bool {
    let image = match convention {
        IsometryConvention::ConjTransposeLeft => u.conj_transpose().mul(&h.h).mul(u),
        IsometryConvention::TransposeLeft => u.transpose().mul(&h.h).mul(&u.conj()),
    };
    image == h.h
}

/// `conj(U)^T H U = H`, exactly.
pub fn isometry_check(u: &OKMatrix, h: &GramMatrix) -> bool {
    isometry_check_with(u, h, IsometryConvention::ConjTransposeLeft)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingOutcome {
    pub reading: H1Reading,
    pub convention: IsometryConvention,
    pub hermitian: bool,
    pub r_isometry: bool,
    pub s_isometry: bool,
    pub det: OKElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub checksum: String,
    pub checksum_ok: bool,
    pub h1_diagonal: Vec<OKElement>,
    pub trace_r: OKElement,
    pub trace_s: OKElement,
    pub det_r: OKElement,
    pub det_s: OKElement,
    /// `R^5 = I`, `S^2 = I` and `R S R = S`.
    pub relations: bool,
    pub outcomes: Vec<ReadingOutcome>,
    /// First reading and convention under which both isometries hold.
    pub frozen: Option<(H1Reading, IsometryConvention)>,
    pub rs_group: GroupReport,
    pub rs_minus_group: GroupReport,
}

pub const CLOSURE_LIMIT: usize = 1000;

pub fn group_closure(gens: &[OKMatrix], max_order: usize) -> Result<GroupReport> {
    let n = gens.first().map_or(5, OKMatrix::size);
    group_report(gens, OKMatrix::identity(n), |a, b| a.mul(b), max_order)
}

pub fn verify_lattice_data() -> Result<LatticeReport> {
    let data = load_lattice_data();
    let (r, s) = (&data.r, &data.s);
    let mut outcomes = Vec::new();
    for reading in [H1Reading::LowerCompletion, H1Reading::Raw] {
        let h = GramMatrix::from_reading(reading);
        for convention in [IsometryConvention::ConjTransposeLeft, IsometryConvention::TransposeLeft] {
            outcomes.push(ReadingOutcome {
                reading,
                convention,
                hermitian: h.h.is_hermitian(),
                r_isometry: isometry_check_with(r, &h, convention),
                s_isometry: isometry_check_with(s, &h, convention),
                det: h.h.det(),
            });
        }
    }
    let frozen =
        outcomes.iter().find(|o| o.hermitian && o.r_isometry && o.s_isometry).map(|o| (o.reading, o.convention));
    let checksum = lattice_checksum();
    let minus = OKMatrix::identity(5).neg();
    Ok(LatticeReport {
        checksum_ok: checksum == LATTICE_SHA256,
        checksum,
        h1_diagonal: data.h1.diagonal(),
        trace_r: r.trace(),
        trace_s: s.trace(),
        det_r: r.det(),
        det_s: s.det(),
        relations: r.pow(5) == OKMatrix::identity(5) && s.pow(2) == OKMatrix::identity(5) && r.mul(s).mul(r) == *s,
        outcomes,
        frozen,
        rs_group: group_closure(&[r.clone(), s.clone()], CLOSURE_LIMIT)?,
        rs_minus_group: group_closure(&[r.clone(), s.clone(), minus], CLOSURE_LIMIT)?,
    })
}

/// Which root of `x^2 - x + 5` in `F_q` is the image of `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootChoice {
    /// The root with the smaller code.
    Smaller,
    /// The other root, `1 - g`.
    Larger,
}

/// The two distinct roots of `x^2 - x + 5`, ascending.
pub fn gamma_roots(f: &FieldSpec) -> Result<[Fq; 2]> {
    let roots = if f.p() == 2 {
        let c = f.from_int(5);
        f.elements().filter(|&x| f.add(f.sub(f.square(x), x), c).is_zero()).collect()
    } else {
        f.quadratic_roots(f.from_int(-1), f.from_int(5))?
    };
    match roots[..] {
        [g0, g1] => Ok([g0, g1]),
        _ => Err(Error::NotSplit { q: f.q() }),
    }
}

pub fn reduce_mod_q(m: &OKMatrix, f: &FieldSpec, choice: RootChoice) -> Result<Matrix> {
    let [g0, g1] = gamma_roots(f)?;
    let g = match choice {
        RootChoice::Smaller => g0,
        RootChoice::Larger => g1,
    };
    Ok(m.reduce(f, g))
}

/// Dimensions of `ker (M - lambda I)^j` for `j = 1..=n`, per eigenvalue
/// `lambda` in `F_q`.
pub fn rank_profile(f: &FieldSpec, m: &Matrix) -> Result<Vec<(Fq, Vec<usize>)>> {
    let n = m.rows();
    let cp = m.charpoly(f)?;
    let mut out = Vec::new();
    for lambda in f.elements() {
        let value = cp.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, lambda), c));
        if !value.is_zero() {
            continue;
        }
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] = f.sub(shifted[(i, i)], lambda);
        }
        let mut power = Matrix::identity(n);
        let mut dims = Vec::with_capacity(n);
        for _ in 0..n {
            power = power.mul(f, &shifted)?;
            dims.push(n - power.rank(f));
        }
        out.push((lambda, dims));
    }
    Ok(out)
}

/// Field-valued fields are codes; see [`FieldSpec::coeffs`] for export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub q: u64,
    pub roots: [Fq; 2],
    pub choice: RootChoice,
    pub r: Matrix,
    pub s: Matrix,
    /// Coefficients low to high.
    pub charpoly_r: Vec<Fq>,
    pub charpoly_s: Vec<Fq>,
    pub r_order5: bool,
    pub s_order2: bool,
    /// `R S R = S` after reduction.
    pub rsr: bool,
    /// Equal characteristic polynomials and rank profiles for both roots.
    pub choices_conjugate: bool,
}

pub fn reduction_report(f: &FieldSpec, choice: RootChoice) -> Result<ReductionReport> {
    let data = load_lattice_data();
    let roots = gamma_roots(f)?;
    let r = reduce_mod_q(&data.r, f, choice)?;
    let s = reduce_mod_q(&data.s, f, choice)?;
    let id = Matrix::identity(5);
    let conjugate = |m: &OKMatrix| -> Result<bool> {
        let a = reduce_mod_q(m, f, RootChoice::Smaller)?;
        let b = reduce_mod_q(m, f, RootChoice::Larger)?;
        Ok(a.charpoly(f)? == b.charpoly(f)? && rank_profile(f, &a)? == rank_profile(f, &b)?)
    };
    Ok(ReductionReport {
        q: f.q(),
        roots,
        choice,
        charpoly_r: r.charpoly(f)?,
        charpoly_s: s.charpoly(f)?,
        r_order5: r.pow(f, 5)? == id,
        s_order2: s.pow(f, 2)? == id,
        rsr: r.mul(f, &s)?.mul(f, &r)? == s,
        choices_conjugate: conjugate(&data.r)? && conjugate(&data.s)?,
        r,
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use proptest::prelude::*;

    fn elem() -> impl Strategy<Value = OKElement> {
        (-50i64..50, -50i64..50).prop_map(|(a, b)| OKElement::new(a, b))
    }

    #[test]
    fn ok_examples() {
        let g = OKElement::gamma();
        assert_eq!(g.mul(&g), OKElement::new(-5, 1));
        assert_eq!(g.mul(&g.conj()), OKElement::new(5, 0));
        assert_eq!(g.norm(), BigInt::from(5));
    }

    proptest! {
        #[test]
        fn ok_ring_laws(x in elem(), y in elem(), z in elem()) {
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
            prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
            prop_assert!(x.norm() >= BigInt::zero());
            // x conj(x) is the rational integer N(x)
            prop_assert_eq!(x.mul(&x.conj()), OKElement { a: x.norm(), b: BigInt::zero() });
        }
    }

    #[test]
    fn ok_element_json_is_a_pair() {
        let x = OKElement::new(-3, 7);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[-3,7]");
        assert_eq!(serde_json::from_str::<OKElement>("[-3,7]").unwrap(), x);
        let big = OKElement { a: BigInt::from(i64::MAX) * 4, b: BigInt::one() };
        let json = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<OKElement>(&json).unwrap(), big);
    }

    #[test]
    fn lattice_constants() {
        assert_eq!(lattice_checksum(), LATTICE_SHA256);
        let d = load_lattice_data();
        assert_eq!(d.r.trace(), OKElement::zero());
        assert_eq!(d.s.trace(), OKElement::one());
        let diag: Vec<i64> = d.h1.diagonal().iter().map(|x| x.a.to_i64().unwrap()).collect();
        assert_eq!(diag, vec![3, 3, 3, 4, 5]);
        assert!(d.h1.h.is_hermitian());
        assert!(!GramMatrix::from_reading(H1Reading::Raw).h.is_hermitian());
        assert_eq!(d.h1.h.det(), OKElement::one());
    }

    #[test]
    fn generator_relations() {
        let d = load_lattice_data();
        let id = OKMatrix::identity(5);
        assert_eq!(d.r.pow(5), id);
        assert_eq!(d.s.pow(2), id);
        assert_eq!(d.r.mul(&d.s).mul(&d.r), d.s);
        assert!(d.r.det().is_unit() && d.s.det().is_unit());
    }

    #[test]
    fn closures() {
        let d = load_lattice_data();
        let rs = group_closure(&[d.r.clone(), d.s.clone()], 100).unwrap();
        assert_eq!(rs.order, 10);
        assert!(rs.dihedral_d5);
        assert_eq!(rs.element_orders, [(1, 1), (2, 5), (5, 4)].into_iter().collect());
        let minus = OKMatrix::identity(5).neg();
        assert_eq!(group_closure(&[d.r.clone(), d.s.clone(), minus], 100).unwrap().order, 20);
        assert_eq!(group_closure(&[OKMatrix::identity(5)], 100).unwrap().order, 1);
        let two = OKMatrix::identity(5).scale(&OKElement::new(2, 0));
        assert_eq!(group_closure(&[two], 10), Err(Error::ClosureTooLarge { max_order: 10 }));
    }

    #[test]
    fn isometry_is_exact_matrix_identity() {
        let d = load_lattice_data();
        let two = OKMatrix::identity(5).scale(&OKElement::new(2, 0));
        assert!(!isometry_check(&two, &d.h1));
        assert!(isometry_check(&OKMatrix::identity(5), &d.h1));
        assert!(isometry_check(&OKMatrix::identity(5).neg(), &d.h1));
        // a diagonal unit matrix preserves a diagonal form
        let diag = GramMatrix {
            reading: H1Reading::Raw,
            h: OKMatrix::from_pairs(&[
                [(1, 0), (0, 0), (0, 0), (0, 0), (0, 0)],
                [(0, 0), (2, 0), (0, 0), (0, 0), (0, 0)],
                [(0, 0), (0, 0), (3, 0), (0, 0), (0, 0)],
                [(0, 0), (0, 0), (0, 0), (4, 0), (0, 0)],
                [(0, 0), (0, 0), (0, 0), (0, 0), (5, 0)],
            ]),
        };
        let flip = OKMatrix::identity(5).add(&OKMatrix::identity(5).neg().add(&OKMatrix::identity(5).neg()));
        assert!(isometry_check(&flip, &diag));
    }

    #[test]
    fn lattice_report_records_every_reading() {
        let report = verify_lattice_data().unwrap();
        assert_eq!(report.outcomes.len(), 4);
        assert!(report.relations);
        assert_eq!(report.rs_minus_group.order, 20);
        for o in &report.outcomes {
            let h = GramMatrix::from_reading(o.reading);
            assert_eq!(o.r_isometry, isometry_check_with(&load_lattice_data().r, &h, o.convention));
        }
    }

    #[test]
    fn reduction_over_f61() {
        let f = FieldSpec::prime(61).unwrap();
        let mut x5_minus_1 = vec![Fq::ZERO; 6];
        x5_minus_1[0] = f.from_int(-1);
        x5_minus_1[5] = Fq::ONE;
        // (x - 1)^3 (x + 1)^2 = x^5 - x^4 - 2x^3 + 2x^2 + x - 1
        let s_poly: Vec<Fq> = [-1, 1, 2, -2, -1, 1].iter().map(|&c| f.from_int(c)).collect();
        for choice in [RootChoice::Smaller, RootChoice::Larger] {
            let rep = reduction_report(&f, choice).unwrap();
            assert_eq!(rep.charpoly_r, x5_minus_1);
            assert_eq!(rep.charpoly_s, s_poly);
            assert!(rep.r_order5 && rep.s_order2 && rep.rsr);
            assert_eq!(rep.r.trace(&f), Fq::ZERO);
        }
        let id: Vec<Fq> = [-1, 5, -10, 10, -5, 1].iter().map(|&c| f.from_int(c)).collect();
        assert_eq!(Matrix::identity(5).charpoly(&f).unwrap(), id);
    }

    #[test]
    fn reduction_split_condition_matches_legendre() {
        let d = load_lattice_data();
        for p in primes_up_to(400).into_iter().filter(|&p| p > 2 && p != 19) {
            let f = FieldSpec::prime(p).unwrap();
            // Euler's criterion for -19
            let legendre = f.pow(f.from_int(-19), ((p - 1) / 2) as u128) == Fq::ONE;
            assert_eq!(reduce_mod_q(&d.r, &f, RootChoice::Smaller).is_ok(), legendre, "p = {p}");
        }
        let f47 = FieldSpec::prime(47).unwrap();
        assert!(reduce_mod_q(&d.r, &f47, RootChoice::Smaller).is_ok());
        let f13 = FieldSpec::prime(13).unwrap();
        assert_eq!(reduce_mod_q(&d.r, &f13, RootChoice::Smaller), Err(Error::NotSplit { q: 13 }));
    }

    #[test]
    fn root_choices_give_conjugate_reductions() {
        for q in [11u64, 61, 311] {
            let f = FieldSpec::prime(q).unwrap();
            let rep = reduction_report(&f, RootChoice::Smaller).unwrap();
            assert!(rep.choices_conjugate, "q = {q}");
            assert!(rep.r_order5 && rep.s_order2 && rep.rsr);
        }
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let d = load_lattice_data();
        let f = FieldSpec::prime(61).unwrap();
        let words = [vec![&d.r, &d.s], vec![&d.s, &d.r, &d.r], vec![&d.r, &d.r, &d.s, &d.r]];
        for choice in [RootChoice::Smaller, RootChoice::Larger] {
            for w in &words {
                let exact = w.iter().skip(1).fold(w[0].clone(), |acc, m| acc.mul(m));
                let reduced = w.iter().skip(1).try_fold(reduce_mod_q(w[0], &f, choice).unwrap(), |acc, m| {
                    acc.mul(&f, &reduce_mod_q(m, &f, choice).unwrap())
                });
                assert_eq!(reduce_mod_q(&exact, &f, choice).unwrap(), reduced.unwrap());
            }
        }
    }
}
