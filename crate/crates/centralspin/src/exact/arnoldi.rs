//! Shift-invert Arnoldi on a sparse LU factorization.
//!
//! The Krylov space of `(L − σ)⁻¹` is grown until the `nev` Ritz values of
//! largest modulus (eigenvalues of `L` closest to `σ`) are converged. The
//! problems we meet converge long before memory becomes an issue, so no
//! restarting is done.

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::Mat;
use num_complex::Complex64;

pub struct ShiftInvert {
    lu: Lu<usize, Complex64>,
    pub sigma: Complex64,
    pub n: usize,
}

impl ShiftInvert {
    pub fn new(l: &CsrMatrix, sigma: Complex64) -> Result<Self> {
        let a = l.to_faer(sigma);
        let lu = a
            .sp_lu()
            .map_err(|e| Error::Numerical(format!("sparse LU failed: {e:?}")))?;
        Ok(ShiftInvert { lu, sigma, n: l.nrows })
    }

    /// (L − σ)⁻¹ x
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let b = Mat::from_fn(self.n, 1, |i, _| x[i]);
        let y = self.lu.solve(&b);
        (0..self.n).map(|i| y[(i, 0)]).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ArnoldiOptions {
    /// Relative residual |h_{m+1,m} y_m| / |θ| required for every wanted pair.
    pub tol: f64,
    pub max_dim: usize,
    pub check_every: usize,
    pub seed: u64,
}

impl Default for ArnoldiOptions {
    fn default() -> Self {
        ArnoldiOptions { tol: 1e-10, max_dim: 160, check_every: 8, seed: 0x5eed }
    }
}

#[derive(Debug, Clone)]
pub struct RitzPair {
    pub lambda: Complex64,
    /// Unit-norm Ritz vector.
    pub vector: Vec<Complex64>,
    /// Relative Ritz residual in the shift-inverted problem.
    pub residual: f64,
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Deterministic start vector (xorshift; no dependence on thread scheduling).
fn start_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let mut s = seed | 1;
    let mut next = || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut v: Vec<Complex64> = (0..n).map(|_| Complex64::new(next(), next())).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    v
}

struct Ritz {
    theta: Complex64,
    y: Vec<Complex64>,
    residual: f64,
}

fn ritz(h: &[Vec<Complex64>], m: usize) -> Result<Vec<Ritz>> {
    let hm = Mat::from_fn(m, m, |i, j| h[i][j]);
    let evd = hm
        .eigen()
        .map_err(|e| Error::Numerical(format!("Hessenberg eigenproblem failed: {e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let beta = h[m][m - 1].norm();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let theta = s[i];
        let mut y: Vec<Complex64> = (0..m).map(|r| u[(r, i)]).collect();
        let ny = norm(&y);
        y.iter_mut().for_each(|x| *x /= ny);
        let residual = beta * y[m - 1].norm() / theta.norm().max(1e-300);
        out.push(Ritz { theta, y, residual });
    }
    out.sort_by(|a, b| b.theta.norm().total_cmp(&a.theta.norm()));
    Ok(out)
}

/// The `nev` eigenpairs of `L` closest to the shift.
pub fn eigs_near_shift(op: &ShiftInvert, nev: usize, opts: &ArnoldiOptions) -> Result<Vec<RitzPair>> {
    let n = op.n;
    let nev = nev.min(n);
    let max_dim = opts.max_dim.min(n);
    let mut v: Vec<Vec<Complex64>> = vec![start_vector(n, opts.seed)];
    let mut h: Vec<Vec<Complex64>> = vec![];
    let mut last_residual = f64::INFINITY;
    for j in 0..max_dim {
        let mut w = op.apply(&v[j]);
        let mut col = vec![Complex64::new(0.0, 0.0); max_dim + 1];
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for (i, vi) in v.iter().enumerate() {
                let c = dot(vi, &w);
                col[i] += c;
                w.iter_mut().zip(vi).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nw = norm(&w);
        col[j + 1] = Complex64::new(nw, 0.0);
        // h is stored row-major as h[row][col]
        if h.len() < max_dim + 1 {
            h.resize(max_dim + 1, vec![Complex64::new(0.0, 0.0); max_dim]);
        }
        for (i, c) in col.iter().enumerate().take(j + 2) {
            h[i][j] = *c;
        }
        let m = j + 1;
        let invariant = nw <= 1e-14 * col.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let check = invariant || m == max_dim || (m >= nev + 2 && m % opts.check_every == 0);
        if check {
            let r = ritz(&h, m)?;
            let wanted = &r[..nev.min(r.len())];
            last_residual = wanted.iter().map(|x| x.residual).fold(0.0, f64::max);
            if invariant || (wanted.len() == nev && last_residual <= opts.tol) {
                return Ok(assemble(op, &v, wanted));
            }
        }
        if invariant {
            break;
        }
        w.iter_mut().for_each(|x| *x /= nw);
        v.push(w);
    }
    Err(Error::Convergence { iterations: max_dim, residual: last_residual })
}

fn assemble(op: &ShiftInvert, v: &[Vec<Complex64>], wanted: &[Ritz]) -> Vec<RitzPair> {
    wanted
        .iter()
        .map(|r| {
            let mut x = vec![Complex64::new(0.0, 0.0); op.n];
            for (vk, yk) in v.iter().zip(&r.y) {
                x.iter_mut().zip(vk).for_each(|(a, b)| *a += yk * b);
            }
            let nx = norm(&x);
            x.iter_mut().for_each(|a| *a /= nx);
            RitzPair { lambda: op.sigma + 1.0 / r.theta, vector: x, residual: r.residual }
        })
        .collect()
}
