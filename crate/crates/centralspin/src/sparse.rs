//! Minimal compressed-sparse-row matrix used for Hamiltonians and
//! vectorized superoperators.

use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Build from (row, col, value) triplets; duplicates are summed and exact
    /// zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, mut t: Vec<(usize, usize, Complex64)>) -> Self {
        t.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            debug_assert!(r < nrows && c < ncols);
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                col_idx.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        // drop cancelled entries
        let mut k = 0;
        for i in 0..values.len() {
            if values[i] != Complex64::new(0.0, 0.0) {
                values[k] = values[i];
                col_idx[k] = col_idx[i];
                rows[k] = rows[i];
                k += 1;
            }
        }
        values.truncate(k);
        col_idx.truncate(k);
        rows.truncate(k);
        for &r in &rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { nrows, ncols, row_ptr, col_idx, values }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix { nrows, ncols, row_ptr: vec![0; nrows + 1], col_idx: vec![], values: vec![] }
    }

    pub fn identity(n: usize) -> Self {
        let t = (0..n).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect();
        Self::from_triplets(n, n, t)
    }

    pub fn from_dense(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        let mut t = vec![];
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != Complex64::new(0.0, 0.0) {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, m, t)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.col_idx[k], self.values[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.row(r).find(|&(j, _)| j == c).map_or(Complex64::new(0.0, 0.0), |(_, v)| v)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let t = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.ncols, self.nrows, t)
    }

    pub fn conj(&self) -> Self {
        CsrMatrix { values: self.values.iter().map(|v| v.conj()).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CsrMatrix { values: self.values.iter().map(|v| v * s).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let t = self.triplets().chain(other.triplets()).collect();
        Self::from_triplets(self.nrows, self.ncols, t)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut t = vec![];
        for r in 0..self.nrows {
            for (k, v) in self.row(r) {
                for (c, w) in other.row(k) {
                    t.push((r, c, v * w));
                }
            }
        }
        Self::from_triplets(self.nrows, other.ncols, t)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.triplets() {
            for (r2, c2, v2) in other.triplets() {
                t.push((r1 * other.nrows + r2, c1 * other.ncols + c2, v1 * v2));
            }
        }
        Self::from_triplets(self.nrows * other.nrows, self.ncols * other.ncols, t)
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut d = vec![vec![Complex64::new(0.0, 0.0); self.ncols]; self.nrows];
        for (r, c, v) in self.triplets() {
            d[r][c] += v;
        }
        d
    }

    /// Largest absolute deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.adjoint();
        let diff = self.add(&adj.scale(Complex64::new(-1.0, 0.0)));
        diff.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Convert to faer's column-major sparse format with an optional
    /// diagonal shift `self - shift·I`.
    pub fn to_faer(&self, shift: Complex64) -> SparseColMat<usize, Complex64> {
        let mut t: Vec<Triplet<usize, usize, Complex64>> = self
            .triplets()
            .map(|(r, c, v)| Triplet::new(r, c, v))
            .collect();
        if shift != Complex64::new(0.0, 0.0) {
            for i in 0..self.nrows.min(self.ncols) {
                t.push(Triplet::new(i, i, -shift));
            }
        }
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &t)
            .expect("valid triplets")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(2, 2, vec![(0, 1, c(1.0)), (0, 1, c(2.0)), (1, 0, c(1.0)), (1, 0, c(-1.0))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(3.0));
    }

    #[test]
    fn kron_matches_dense() {
        let a = CsrMatrix::from_dense(&[vec![c(1.0), c(2.0)], vec![c(0.0), c(3.0)]]);
        let b = CsrMatrix::from_dense(&[vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]);
        let k = a.kron(&b).to_dense();
        assert_eq!(k[0][1], c(1.0));
        assert_eq!(k[0][3], c(2.0));
        assert_eq!(k[3][2], c(3.0));
        assert_eq!(k[2][2], c(0.0));
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = CsrMatrix::from_dense(&[vec![c(1.0), Complex64::new(0.0, 1.0)], vec![c(0.0), c(2.0)]]);
        let p = a.adjoint().matmul(&a).to_dense();
        assert_eq!(p[0][0], c(1.0));
        assert_eq!(p[1][1], c(5.0));
        assert_eq!(p[0][1], Complex64::new(0.0, 1.0));
    }
}
