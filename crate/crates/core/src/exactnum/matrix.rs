use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use super::scalar::{PScalar, Prime, Valuation};
use crate::error::{Error, Result};

/// Dense matrix over exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PMatrix {
    rows: usize,
    cols: usize,
    data: Vec<PScalar>,
}

impl PMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PMatrix {
            rows,
            cols,
            data: vec![PScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = PScalar::one();
        }
        m
    }

    pub fn diag(entries: &[PScalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// `diag(p^e_1, ..., p^e_n)`.
    pub fn diag_p_powers(p: Prime, exps: &[i64]) -> Self {
        Self::diag(&exps.iter().map(|&e| p.pow(e)).collect::<Vec<_>>())
    }

    pub fn from_rows(rows: Vec<Vec<PScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(PMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| PScalar::from(x)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<PScalar>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged column list");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<PScalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<PScalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[PScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[PScalar] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &PScalar) -> Self {
        PMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Smallest valuation of any entry.
    pub fn min_val(&self, p: Prime) -> Valuation {
        self.data
            .iter()
            .map(|x| x.val(p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn try_mul(&self, rhs: &PMatrix) -> Result<PMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[PScalar]) -> Vec<PScalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = PScalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> PMatrix {
        assert!(self.is_square());
        let mut acc = PMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn det(&self) -> Result<PScalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = PScalar::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Ok(PScalar::zero());
            };
            if piv != c {
                a.swap_rows(piv, c);
                det = -det;
            }
            let pv = a[(c, c)].clone();
            det = det * &pv;
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] / &pv;
                for k in c..n {
                    let t = &f * &a[(c, k)];
                    a[(r, k)] -= &t;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<PMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = PMatrix::identity(n);
        for c in 0..n {
            let piv = (c..n)
                .find(|&r| !a[(r, c)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap_rows(piv, c);
            inv.swap_rows(piv, c);
            let pv = a[(c, c)].inv().expect("nonzero pivot");
            for k in 0..n {
                a[(c, k)] = &a[(c, k)] * &pv;
                inv[(c, k)] = &inv[(c, k)] * &pv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for k in 0..n {
                    let t = &f * &a[(c, k)];
                    a[(r, k)] -= &t;
                    let t = &f * &inv[(c, k)];
                    inv[(r, k)] -= &t;
                }
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients in ascending
    /// degree (`c_0, ..., c_n` with `c_n = 1`). Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<PScalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![PScalar::zero(); n + 1];
        coeffs[n] = PScalar::one();
        let mut m = PMatrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            let am = self * &next;
            let mut tr = PScalar::zero();
            for i in 0..n {
                tr += &am[(i, i)];
            }
            coeffs[n - k] = -(tr / PScalar::from(k as i64));
            m = next;
        }
        coeffs
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `col[dst] -= f * col[src]`
    pub(crate) fn col_axpy(&mut self, dst: usize, f: &PScalar, src: usize) {
        if f.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self[(r, src)];
            if !s.is_zero() {
                let t = f * s;
                self[(r, dst)] -= &t;
            }
        }
    }

    /// `row[dst] -= f * row[src]`
    pub(crate) fn row_axpy(&mut self, dst: usize, f: &PScalar, src: usize) {
        if f.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self[(src, c)];
            if !s.is_zero() {
                let t = f * s;
                self[(dst, c)] -= &t;
            }
        }
    }

    pub(crate) fn scale_col(&mut self, c: usize, f: &PScalar) {
        for r in 0..self.rows {
            self[(r, c)] = &self[(r, c)] * f;
        }
    }
}

impl Index<(usize, usize)> for PMatrix {
    type Output = PScalar;
    fn index(&self, (i, j): (usize, usize)) -> &PScalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for PMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut PScalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul<&PMatrix> for &PMatrix {
    type Output = PMatrix;
    fn mul(self, rhs: &PMatrix) -> PMatrix {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Display for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
