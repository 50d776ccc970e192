//! The trigonal family `F = Y^5 + a3 X Y^2 Z^2 + a4 X^3 Y Z + Z^5`.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ProjectiveSpace;
use crate::arith::{hws_bound, PrimePower};
use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Fq};
use crate::mpoly::MPoly;

/// Default cap on the number of projective points a single enumeration may
/// visit.
pub const DEFAULT_PLANE_BUDGET: u128 = 1 << 28;

/// A member of the family over a fixed field.
#[derive(Debug, Clone, Copy)]
pub struct QuinticModel<'a> {
    spec: &'a FieldSpec,
    a3: Fq,
    a4: Fq,
}

impl<'a> QuinticModel<'a> {
    pub fn new(spec: &'a FieldSpec, a3: Fq, a4: Fq) -> Result<Self> {
        if spec.p() == 5 {
            return Err(Error::UnsupportedCharacteristic {
                p: 5,
                reason: "the quintic family degenerates in characteristic 5",
            });
        }
        spec.element(a3.0)?;
        spec.element(a4.0)?;
        Ok(QuinticModel { spec, a3, a4 })
    }

    pub fn spec(&self) -> &'a FieldSpec {
        self.spec
    }

    pub fn a3(&self) -> Fq {
        self.a3
    }

    pub fn a4(&self) -> Fq {
        self.a4
    }

    /// `a4 = 0`: the singularity at `[1:0:0]` is worse than a node.
    pub fn is_degenerate(&self) -> bool {
        self.a4.is_zero()
    }

    pub fn polynomial(&self) -> MPoly {
        let f = self.spec;
        MPoly::from_terms(
            f,
            3,
            &[
                (Fq::ONE, [0, 5, 0, 0, 0]),
                (self.a3, [1, 2, 2, 0, 0]),
                (self.a4, [3, 1, 1, 0, 0]),
                (Fq::ONE, [0, 0, 5, 0, 0]),
            ],
        )
    }
}

/// `(F, F_X, F_Y, F_Z)` at `[x:y:z]`, all in the field `f`.
fn quintic_values(f: &FieldSpec, a3: Fq, a4: Fq, [x, y, z]: [Fq; 3]) -> [Fq; 4] {
    let (x2, y2, z2) = (f.square(x), f.square(y), f.square(z));
    let x3 = f.mul(x2, x);
    let yz = f.mul(y, z);
    let y2z2 = f.square(yz);
    let five = f.from_int(5);
    let two = f.from_int(2);
    let three = f.from_int(3);
    let y5 = f.mul(f.square(y2), y);
    let z5 = f.mul(f.square(z2), z);
    let big_f = f.add(f.add(y5, z5), f.add(f.mul(a3, f.mul(x, y2z2)), f.mul(a4, f.mul(x3, yz))));
    let fx = f.add(f.mul(a3, y2z2), f.mul(f.mul(three, a4), f.mul(x2, yz)));
    let fy =
        f.add(f.mul(five, f.square(y2)), f.add(f.mul(f.mul(two, a3), f.mul(x, f.mul(y, z2))), f.mul(a4, f.mul(x3, z))));
    let fz =
        f.add(f.mul(f.mul(two, a3), f.mul(x, f.mul(y2, z))), f.add(f.mul(a4, f.mul(x3, y)), f.mul(five, f.square(z2))));
    [big_f, fx, fy, fz]
}

fn as_point(codes: &[u64]) -> [Fq; 3] {
    [Fq(codes[0]), Fq(codes[1]), Fq(codes[2])]
}

/// All points of `P^2(F_{q^e})` where `F` and its three partials vanish,
/// as codes of `F_{q^e}` (see [`FieldSpec::extension`]).
pub fn singular_locus(model: &QuinticModel, e: u32, budget: u128) -> Result<Vec<[Fq; 3]>> {
    if ![1, 2, 4].contains(&e) {
        return Err(Error::InvalidArgument(format!("extension degree {e} not in {{1, 2, 4}}")));
    }
    let f = model.spec;
    let big_q =
        f.q().checked_pow(e).filter(|&bq| bq <= 1 << 32).ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
    let space = ProjectiveSpace::new(big_q, 3);
    if space.len() > budget {
        return Err(Error::BudgetExceeded { needed: space.len(), budget });
    }
    let (big, emb) = f.extension(e)?;
    let (a3, a4) = (emb.apply(&big, model.a3), emb.apply(&big, model.a4));
    let mut out = Vec::new();
    space.for_each_in(0..space.len(), |c| {
        let p = as_point(c);
        if quintic_values(&big, a3, a4, p).iter().all(|v| v.is_zero()) {
            out.push(p);
        }
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFlag {
    /// `a4 = 0`.
    Degenerate,
    /// A singular point other than `[1:0:0]` over `F_q`.
    ExtraSingularFq,
    /// A singular point other than `[1:0:0]` over `F_{q^2}`.
    ExtraSingularFq2,
    /// The `F_{q^2}` pass was not run, so the node cannot be certified.
    Fq2Unchecked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCountReport {
    pub q: u64,
    pub total_points: u64,
    pub smooth_points: u64,
    pub singular_points_fq: Vec<[Fq; 3]>,
    /// Codes in `F_{q^2}`.
    pub singular_points_fq2: Option<Vec<[Fq; 3]>>,
    /// `smooth_points + 2` for a clean node at `[1:0:0]`.
    pub adjusted_count: Option<u64>,
    pub flags: Vec<ModelFlag>,
}

/// Counts `F = 0` on `P^2(F_q)` and classifies the singular points.
pub fn count_plane_points(model: &QuinticModel, check_fq2: bool, budget: u128) -> Result<PlaneCountReport> {
    let f = model.spec;
    let space = ProjectiveSpace::new(f.q(), 3);
    if space.len() > budget {
        return Err(Error::BudgetExceeded { needed: space.len(), budget });
    }
    let mut total = 0u64;
    let mut singular = Vec::new();
    space.for_each_in(0..space.len(), |c| {
        let p = as_point(c);
        let v = quintic_values(f, model.a3, model.a4, p);
        if v[0].is_zero() {
            total += 1;
            if v[1..].iter().all(|x| x.is_zero()) {
                singular.push(p);
            }
        }
    });
    let fq2 = if check_fq2 { Some(singular_locus(model, 2, budget)?) } else { None };
    let mut flags = Vec::new();
    if model.is_degenerate() {
        flags.push(ModelFlag::Degenerate);
    }
    if singular.len() > 1 {
        flags.push(ModelFlag::ExtraSingularFq);
    }
    match &fq2 {
        Some(pts) if pts.len() > 1 => flags.push(ModelFlag::ExtraSingularFq2),
        Some(_) => {}
        None => flags.push(ModelFlag::Fq2Unchecked),
    }
    let smooth = total - singular.len() as u64;
    Ok(PlaneCountReport {
        q: f.q(),
        total_points: total,
        smooth_points: smooth,
        singular_points_fq: singular,
        singular_points_fq2: fq2,
        adjusted_count: flags.is_empty().then_some(smooth + 2),
        flags,
    })
}

/// Number of singular points besides `[1:0:0]`, valid when `q = 1 mod 5`.
///
/// Away from `[1:0:0]` a singular point has `X Y Z != 0`, and
/// `Y F_Y - Z F_Z = 5 (Y^5 - Z^5)` forces it to be `[1 : Y : w Y]` with
/// `w^5 = 1`. Eliminating `Y` between `F_X` and `F_Y` leaves
/// `a3^3 + 27 a4 = 0` (with `a4 != 0`), in which case each of the five `w`
/// contributes the single point `Y = -a3 w^2 / 3`, all defined over `F_q`.
/// In characteristic 3 the condition reads `a3 = 0`, `a4 != 0`.
pub fn extra_singular_points(f: &FieldSpec, a3: Fq, a4: Fq) -> u8 {
    if a4.is_zero() {
        return 0;
    }
    let cube = f.mul(f.square(a3), a3);
    if f.add(cube, f.mul(f.from_int(27), a4)).is_zero() {
        5
    } else {
        0
    }
}

/// Per-model record of a trigonal search table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrigonalEntry {
    /// Points of `F = 0` in `P^2(F_q)`.
    pub total: u32,
    /// Singular points over `F_q`, including `[1:0:0]`.
    pub singular_fq: u8,
    /// Singular points over `F_{q^2}`, including `[1:0:0]`.
    pub singular_fq2: u8,
}

impl TrigonalEntry {
    pub fn smooth(&self) -> u32 {
        self.total - self.singular_fq as u32
    }

    /// `smooth + 2` for a non-degenerate model whose only singular point
    /// over `F_q` and `F_{q^2}` is the node.
    pub fn adjusted(&self, a4_is_zero: bool) -> Option<u32> {
        (!a4_is_zero && self.singular_fq == 1 && self.singular_fq2 == 1).then(|| self.smooth() + 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigonalMode {
    /// `O(q^3)`: accumulate per-point linear conditions in `(a3, a4)`.
    Fast,
    /// Enumerate every model over `F_q` and `F_{q^2}`; `q <= 64`.
    Naive,
}

/// Row kernel for trigonal search tables. Row `a3` holds the `q` models
/// `(a3, a4)`, `a4` in code order.
#[derive(Debug, Clone)]
pub struct TrigonalKernel {
    spec: FieldSpec,
    mode: TrigonalMode,
    /// Points with `XYZ = 0` lying on every member of the family.
    global: u32,
    /// For `[1:y:z]`, `yz != 0`: `F = 0` iff `a4 = -t - a3 s` with
    /// `s = yz`, `t = (y^5 + z^5) / yz`. Grouped by `(s, t)`.
    s: Vec<Fq>,
    neg_t: Vec<Fq>,
    mult: Vec<u32>,
}

impl TrigonalKernel {
    pub const NAIVE_MAX_Q: u64 = 64;

    pub fn new(q: u64, mode: TrigonalMode) -> Result<Self> {
        let pp = PrimePower::new(q)?;
        if q % 5 != 1 {
            return Err(Error::InvalidArgument(format!("the trigonal family needs q = 1 mod 5, got q = {q}")));
        }
        if mode == TrigonalMode::Naive && q > Self::NAIVE_MAX_Q {
            return Err(Error::InvalidArgument(format!("naive mode is limited to q <= {}", Self::NAIVE_MAX_Q)));
        }
        let spec = FieldSpec::new(pp.p, pp.r)?;
        let mut kernel = TrigonalKernel { spec, mode, global: 0, s: Vec::new(), neg_t: Vec::new(), mult: Vec::new() };
        if mode == TrigonalMode::Fast {
            kernel.precompute();
        }
        Ok(kernel)
    }

    fn precompute(&mut self) {
        let f = &self.spec;
        let q = f.q();
        let fifth: Vec<Fq> = f.elements().map(|a| f.pow(a, 5)).collect();
        self.global = axis_points(f, &fifth);
        let inv: Vec<Fq> = f.elements().map(|a| f.inv(a).unwrap_or(Fq::ZERO)).collect();
        let mut keys = Vec::with_capacity(((q - 1) * (q - 1)) as usize);
        for y in 1..q {
            for z in 1..q {
                let s = f.mul(Fq(y), Fq(z));
                let t = f.mul(f.add(fifth[y as usize], fifth[z as usize]), f.mul(inv[y as usize], inv[z as usize]));
                keys.push(s.0 * q + f.neg(t).0);
            }
        }
        keys.sort_unstable();
        let mut i = 0;
        while i < keys.len() {
            let mut j = i;
            while j < keys.len() && keys[j] == keys[i] {
                j += 1;
            }
            self.s.push(Fq(keys[i] / q));
            self.neg_t.push(Fq(keys[i] % q));
            self.mult.push((j - i) as u32);
            i = j;
        }
    }

    pub fn q(&self) -> u64 {
        self.spec.q()
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn mode(&self) -> TrigonalMode {
        self.mode
    }

    /// Entries for `a3` in `rows` (codes), row-major.
    pub fn rows(&self, rows: Range<u64>) -> Vec<TrigonalEntry> {
        let rows = rows.start.min(self.q())..rows.end.min(self.q());
        match self.mode {
            TrigonalMode::Fast => self.fast_rows(rows),
            TrigonalMode::Naive => self.naive_rows(rows),
        }
    }

    pub fn table(&self) -> SearchTable {
        SearchTable::new(self.q(), self.rows(0..self.q()))
    }

    fn fast_rows(&self, rows: Range<u64>) -> Vec<TrigonalEntry> {
        let f = &self.spec;
        let q = f.q();
        let n_rows = (rows.end - rows.start) as usize;
        let mut totals = vec![self.global; n_rows * q as usize];
        if f.r() == 1 {
            let p = q;
            let s: Vec<u64> = self.s.iter().map(|x| x.0).collect();
            let mut cur: Vec<u64> = self
                .neg_t
                .iter()
                .zip(&s)
                .map(|(nt, &si)| {
                    let prod = (rows.start as u128 * si as u128 % p as u128) as u64;
                    (nt.0 + p - prod) % p
                })
                .collect();
            for row in totals.chunks_exact_mut(q as usize) {
                for ((c, &si), &m) in cur.iter_mut().zip(&s).zip(&self.mult) {
                    row[*c as usize] += m;
                    *c = if *c >= si { *c - si } else { *c + p - si };
                }
            }
        } else {
            for (a3, row) in rows.clone().zip(totals.chunks_exact_mut(q as usize)) {
                for ((&si, &nt), &m) in self.s.iter().zip(&self.neg_t).zip(&self.mult) {
                    let a4 = f.sub(nt, f.mul(Fq(a3), si));
                    row[a4.0 as usize] += m;
                }
            }
        }
        let mut out = Vec::with_capacity(totals.len());
        for (a3, row) in rows.zip(totals.chunks_exact(q as usize)) {
            for (a4, &total) in row.iter().enumerate() {
                let sing = 1 + extra_singular_points(f, Fq(a3), Fq(a4 as u64));
                out.push(TrigonalEntry { total, singular_fq: sing, singular_fq2: sing });
            }
        }
        out
    }

    fn naive_rows(&self, rows: Range<u64>) -> Vec<TrigonalEntry> {
        let f = &self.spec;
        let q = f.q();
        let n_rows = (rows.end - rows.start) as usize;
        let mut out = vec![TrigonalEntry::default(); n_rows * q as usize];
        let plane = ProjectiveSpace::new(q, 3);
        for (row, a3) in rows.clone().enumerate() {
            for a4 in 0..q {
                let entry = &mut out[row * q as usize + a4 as usize];
                plane.for_each_in(0..plane.len(), |c| {
                    let v = quintic_values(f, Fq(a3), Fq(a4), as_point(c));
                    if v[0].is_zero() {
                        entry.total += 1;
                        if v[1..].iter().all(|x| x.is_zero()) {
                            entry.singular_fq += 1;
                        }
                    }
                });
            }
        }
        // F_{q^2} pass: loop over points, and for each point over all models,
        // screening with F_X = a3 (Y^2 Z^2) + a4 (3 X^2 Y Z).
        let (big, emb) = f.extension(2).expect("quadratic extension of a small field");
        let a3s: Vec<Fq> = rows.clone().map(|a| emb.apply(&big, Fq(a))).collect();
        let a4s: Vec<Fq> = (0..q).map(|a| emb.apply(&big, Fq(a))).collect();
        let three = big.from_int(3);
        let big_plane = ProjectiveSpace::new(big.q(), 3);
        let mut lhs = vec![Fq::ZERO; a3s.len()];
        let mut rhs = vec![Fq::ZERO; a4s.len()];
        big_plane.for_each_in(0..big_plane.len(), |c| {
            let p = as_point(c);
            let [x, y, z] = p;
            let yz = big.mul(y, z);
            let m1 = big.square(yz);
            let m2 = big.mul(three, big.mul(big.square(x), yz));
            for (l, &a3) in lhs.iter_mut().zip(&a3s) {
                *l = big.mul(a3, m1);
            }
            for (r, &a4) in rhs.iter_mut().zip(&a4s) {
                *r = big.neg(big.mul(a4, m2));
            }
            for (row, &l) in lhs.iter().enumerate() {
                for (col, &r) in rhs.iter().enumerate() {
                    if l != r {
                        continue;
                    }
                    if quintic_values(&big, a3s[row], a4s[col], p).iter().all(|v| v.is_zero()) {
                        out[row * q as usize + col].singular_fq2 += 1;
                    }
                }
            }
        });
        out
    }
}

/// Points of the coordinate triangle `XYZ = 0` on `Y^5 + Z^5 = 0`.
fn axis_points(f: &FieldSpec, fifth: &[Fq]) -> u32 {
    let plane = ProjectiveSpace::new(f.q(), 3);
    let mut n = 0;
    plane.for_each_in(0..plane.len(), |c| {
        if c.iter().any(|&v| v == 0) && f.add(fifth[c[1] as usize], fifth[c[2] as usize]).is_zero() {
            n += 1;
        }
    });
    n
}

/// Complete `(a3, a4)` table for one `q`, indexed by `a3 * q + a4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTable {
    pub q: u64,
    pub n_max: u64,
    pub entries: Vec<TrigonalEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub q: u64,
    pub n_max: u64,
    pub pairs: u64,
    /// Maximum adjusted count over clean (non-degenerate, nodal) models.
    pub max_adjusted: Option<u64>,
    /// Parameter codes `(a3, a4)` attaining `max_adjusted`.
    pub argmax: Vec<(u64, u64)>,
    pub max_total: u64,
    pub clean: u64,
    pub degenerate: u64,
    pub extra_singular: u64,
    /// `max_adjusted < n_max`.
    pub below_bound: bool,
}

impl SearchTable {
    pub fn new(q: u64, entries: Vec<TrigonalEntry>) -> Self {
        assert_eq!(entries.len() as u64, q * q, "a search table covers all q^2 pairs");
        let pp = PrimePower::new(q).expect("tables are built for prime powers");
        let n_max = hws_bound(&pp, 5).n_max as u64;
        SearchTable { q, n_max, entries }
    }

    pub fn entry(&self, a3: u64, a4: u64) -> TrigonalEntry {
        self.entries[(a3 * self.q + a4) as usize]
    }

    pub fn adjusted(&self, a3: u64, a4: u64) -> Option<u64> {
        self.entry(a3, a4).adjusted(a4 == 0).map(u64::from)
    }

    pub fn summary(&self) -> SearchSummary {
        let mut s = SearchSummary {
            q: self.q,
            n_max: self.n_max,
            pairs: self.entries.len() as u64,
            max_adjusted: None,
            argmax: Vec::new(),
            max_total: 0,
            clean: 0,
            degenerate: 0,
            extra_singular: 0,
            below_bound: true,
        };
        for (idx, e) in self.entries.iter().enumerate() {
            let (a3, a4) = (idx as u64 / self.q, idx as u64 % self.q);
            s.max_total = s.max_total.max(e.total as u64);
            if a4 == 0 {
                s.degenerate += 1;
                continue;
            }
            match e.adjusted(false) {
                None => s.extra_singular += 1,
                Some(adj) => {
                    s.clean += 1;
                    let adj = adj as u64;
                    match s.max_adjusted {
                        Some(m) if adj < m => {}
                        Some(m) if adj == m => s.argmax.push((a3, a4)),
                        _ => {
                            s.max_adjusted = Some(adj);
                            s.argmax = vec![(a3, a4)];
                        }
                    }
                }
            }
        }
        s.below_bound = s.max_adjusted.is_none_or(|m| m < self.n_max);
        s
    }

    /// Fixed little-endian layout: `q`, then `(total, singular_fq,
    /// singular_fq2)` per entry.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 6 * self.entries.len());
        out.extend_from_slice(&self.q.to_le_bytes());
        for e in &self.entries {
            out.extend_from_slice(&e.total.to_le_bytes());
            out.push(e.singular_fq);
            out.push(e.singular_fq2);
        }
        out
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_bytes()))
    }
}
