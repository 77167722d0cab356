//! Dense matrices over GF(q): elimination, rank, kernels and linear solves.
//!
//! Elimination pivots on the first nonzero entry in column order, so echelon
//! forms and kernel bases are a deterministic function of the input.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::{GfContext, GfElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GfElement>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: GfMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl GfMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<GfElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(GfMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        GfMatrix { rows, cols, data: vec![GfElement::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GfElement::ONE);
        }
        m
    }

    /// Builds a matrix from equal-length rows. An empty slice gives a `0 x cols` matrix.
    pub fn from_rows(rows: &[Vec<GfElement>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(GfMatrix { rows: rows.len(), cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> GfElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: GfElement) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[GfElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [GfElement] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[GfElement] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<GfElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut t = GfMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &GfMatrix, f: &GfContext) -> Result<GfMatrix> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = GfMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(r);
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = f.mul_add(*d, a, b);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `v · self`.
    pub fn vec_mul(&self, v: &[GfElement], f: &GfContext) -> Result<Vec<GfElement>> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, found: v.len() });
        }
        let mut out = vec![GfElement::ZERO; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (d, &b) in out.iter_mut().zip(self.row(r)) {
                *d = f.mul_add(*d, a, b);
            }
        }
        Ok(out)
    }

    /// Matrix times column vector, `self · v`.
    pub fn mul_vec(&self, v: &[GfElement], f: &GfContext) -> Result<Vec<GfElement>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(GfElement::ZERO, |acc, (&a, &b)| f.mul_add(acc, a, b)))
            .collect())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<GfMatrix> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange { index: bad, limit: self.cols });
        }
        let mut out = GfMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            let src = self.row(r);
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = src[c];
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<GfMatrix> {
        if let Some(&bad) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::IndexOutOfRange { index: bad, limit: self.rows });
        }
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Ok(GfMatrix { rows: rows.len(), cols: self.cols, data })
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.cols != other.cols {
            return Err(Error::LengthMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(GfMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Columns `[iα, (i+1)α)` for each thick index `i` in `thick`, in the given order.
    pub fn restrict_thick(&self, alpha: usize, thick: &[usize]) -> Result<GfMatrix> {
        if alpha == 0 || self.cols % alpha != 0 {
            return Err(Error::LengthMismatch { expected: alpha, found: self.cols });
        }
        let n = self.cols / alpha;
        let mut cols = Vec::with_capacity(thick.len() * alpha);
        for &i in thick {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, limit: n });
            }
            cols.extend(i * alpha..(i + 1) * alpha);
        }
        self.select_columns(&cols)
    }

    /// Reduced row echelon form with first-nonzero pivoting.
    pub fn echelon(&self, f: &GfContext) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(found, pivot_row);
            let inv = f.inv(m.get(pivot_row, col)).expect("pivot is nonzero");
            for v in m.row_mut(pivot_row) {
                *v = f.mul(*v, inv);
            }
            for r in 0..m.rows {
                if r != pivot_row {
                    let factor = m.get(r, col);
                    if !factor.is_zero() {
                        m.eliminate(r, pivot_row, col, f.neg(factor), f);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self, f: &GfContext) -> usize {
        // Forward elimination only; no normalisation or back-substitution.
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(found) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(found, rank);
            let inv = f.neg(f.inv(m.get(rank, col)).expect("pivot is nonzero"));
            for r in rank + 1..m.rows {
                let v = m.get(r, col);
                if !v.is_zero() {
                    m.eliminate(r, rank, col, f.mul(v, inv), f);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis (as rows) of the right kernel `{v : self · vᵀ = 0}`.
    pub fn null_space(&self, f: &GfContext) -> GfMatrix {
        let ech = self.echelon(f);
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = GfMatrix::zeros(free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            basis.set(i, fc, GfElement::ONE);
            for (pr, &pc) in ech.pivots.iter().enumerate() {
                basis.set(i, pc, f.neg(ech.reduced.get(pr, fc)));
            }
        }
        basis
    }

    /// Basis (as rows) of the left kernel `{u : u · self = 0}`.
    pub fn left_kernel(&self, f: &GfContext) -> GfMatrix {
        self.transpose().null_space(f)
    }

    /// Nonzero rows of the reduced echelon form.
    pub fn row_space_basis(&self, f: &GfContext) -> GfMatrix {
        let ech = self.echelon(f);
        let rank = ech.rank();
        let mut m = ech.reduced;
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    /// Solves `self · x = rhs` for a unique `x`.
    pub fn solve(&self, rhs: &[GfElement], f: &GfContext) -> Result<Vec<GfElement>> {
        if rhs.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, found: rhs.len() });
        }
        let mut aug = GfMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            aug.set(r, self.cols, rhs[r]);
        }
        let ech = aug.echelon(f);
        if ech.pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        if ech.rank() < self.cols {
            return Err(Error::Underdetermined { rank: ech.rank(), unknowns: self.cols });
        }
        let mut x = vec![GfElement::ZERO; self.cols];
        for (r, &c) in ech.pivots.iter().enumerate() {
            x[c] = ech.reduced.get(r, self.cols);
        }
        Ok(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * cols);
        head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
    }

    /// `row[target] += factor * row[source]`, touching columns from `from_col` on.
    fn eliminate(&mut self, target: usize, source: usize, from_col: usize, factor: GfElement, f: &GfContext) {
        let cols = self.cols;
        let (t, s) = if target < source {
            let (head, tail) = self.data.split_at_mut(source * cols);
            (&mut head[target * cols..(target + 1) * cols], &tail[..cols])
        } else {
            let (head, tail) = self.data.split_at_mut(target * cols);
            (&mut tail[..cols], &head[source * cols..(source + 1) * cols])
        };
        for c in from_col..cols {
            t[c] = f.mul_add(t[c], factor, s[c]);
        }
    }
}

/// Square Vandermonde matrix with rows `[1, p, p², …, p^{d-1}]`.
pub fn vandermonde(points: &[GfElement], d: usize, f: &GfContext) -> GfMatrix {
    let mut m = GfMatrix::zeros(points.len(), d);
    for (r, &p) in points.iter().enumerate() {
        let mut acc = GfElement::ONE;
        for c in 0..d {
            m.set(r, c, acc);
            acc = f.mul(acc, p);
        }
    }
    m
}
