use super::{FieldSpec, Fq};
use crate::error::{Error, Result};

/// Dense row-major matrix over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// A particular solution (free variables set to zero) and the dimension
    /// of the solution space.
    Consistent {
        particular: Vec<Fq>,
        nullity: usize,
    },
    Inconsistent,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Fq::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Fq::ONE;
        }
        m
    }

    pub fn diagonal(entries: &[Fq]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fq>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, f: &FieldSpec, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = f.add(out[(i, j)], f.mul(a, other[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, f: &FieldSpec, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Fq::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }

    pub fn pow(&self, f: &FieldSpec, mut e: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base)?;
            }
            base = base.mul(f, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, f: &FieldSpec, c: Fq) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn trace(&self, f: &FieldSpec) -> Fq {
        (0..self.rows.min(self.cols)).fold(Fq::ZERO, |acc, i| f.add(acc, self[(i, i)]))
    }

    /// Rescales so the first nonzero entry in row-major order is 1.
    pub fn normalized_projective(&self, f: &FieldSpec) -> Matrix {
        match self.data.iter().find(|a| !a.is_zero()) {
            None => self.clone(),
            Some(&lead) => self.scale(f, f.inv(lead).expect("nonzero")),
        }
    }

    /// `Some(c)` with `self = c * other`, `c != 0`, if the two agree up to a
    /// nonzero scalar.
    pub fn scalar_ratio(&self, f: &FieldSpec, other: &Matrix) -> Option<Fq> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        let pos = other.data.iter().position(|a| !a.is_zero())?;
        let c = f.div(self.data[pos], other.data[pos]).ok()?;
        if c.is_zero() {
            return None;
        }
        self.data.iter().zip(&other.data).all(|(&a, &b)| a == f.mul(c, b)).then_some(c)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self, f: &FieldSpec, col_limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..col_limit {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self[(r, c)]).expect("pivot is nonzero");
            for j in 0..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                let factor = self[(i, c)];
                if i == r || factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    self[(i, j)] = f.sub(self[(i, j)], f.mul(factor, self[(r, j)]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        let mut m = self.clone();
        m.rref(f, self.cols).len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self, f: &FieldSpec) -> Vec<Vec<Fq>> {
        let mut m = self.clone();
        let pivots = m.rref(f, self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Fq::ZERO; self.cols];
                v[fc] = Fq::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m[(row, fc)]);
                }
                v
            })
            .collect()
    }

    pub fn solve(&self, f: &FieldSpec, rhs: &[Fq]) -> Result<Solution> {
        if rhs.len() != self.rows {
            return Err(Error::InvalidArgument("right-hand side has wrong length".into()));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = rhs[i];
        }
        let pivots = aug.rref(f, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(Solution::Inconsistent);
        }
        let mut particular = vec![Fq::ZERO; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            particular[pc] = aug[(row, self.cols)];
        }
        Ok(Solution::Consistent { particular, nullity: self.cols - pivots.len() })
    }

    pub fn det(&self, f: &FieldSpec) -> Result<Fq> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fq::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Fq::ZERO);
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = f.neg(det);
            }
            let pivot = m[(c, c)];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for i in c + 1..n {
                let factor = f.mul(m[(i, c)], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    m[(i, j)] = f.sub(m[(i, j)], f.mul(factor, m[(c, j)]));
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self, f: &FieldSpec) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Fq::ONE;
        }
        if aug.rref(f, n).len() < n {
            return Err(Error::DivisionByZero);
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)];
            }
        }
        Ok(out)
    }

    /// Characteristic polynomial `det(x I - A)`, monic, low degree first,
    /// via reduction to upper Hessenberg form.
    pub fn charpoly(&self, f: &FieldSpec) -> Result<Vec<Fq>> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("charpoly of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if i != m {
                h.swap_rows(i, m);
                for k in 0..n {
                    h.data.swap(k * n + i, k * n + m);
                }
            }
            let inv = f.inv(h[(m, m - 1)])?;
            for i in m + 1..n {
                let u = f.mul(h[(i, m - 1)], inv);
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    h[(i, j)] = f.sub(h[(i, j)], f.mul(u, h[(m, j)]));
                }
                for k in 0..n {
                    h[(k, m)] = f.add(h[(k, m)], f.mul(u, h[(k, i)]));
                }
            }
        }
        // p_k = charpoly of the leading k x k block
        let mut polys: Vec<Vec<Fq>> = vec![vec![Fq::ONE]];
        for m in 1..=n {
            let prev = &polys[m - 1];
            let mut pm = vec![Fq::ZERO; m + 1];
            let d = h[(m - 1, m - 1)];
            for (k, &c) in prev.iter().enumerate() {
                pm[k + 1] = f.add(pm[k + 1], c);
                pm[k] = f.sub(pm[k], f.mul(d, c));
            }
            let mut t = Fq::ONE;
            for i in 1..m {
                t = f.mul(t, h[(m - i, m - i - 1)]);
                let coef = f.mul(t, h[(m - i - 1, m - 1)]);
                for (k, &c) in polys[m - i - 1].iter().enumerate() {
                    pm[k] = f.sub(pm[k], f.mul(coef, c));
                }
            }
            polys.push(pm);
        }
        Ok(polys.pop().unwrap())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Fq;
    fn index(&self, (i, j): (usize, usize)) -> &Fq {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fq {
        &mut self.data[i * self.cols + j]
    }
}
