//! Exact finite-J Liouvillian: construction, steady state, low-lying
//! spectrum, observables and the bistable steady-state pair.

pub mod arnoldi;
mod bistable;
mod observables;

pub use bistable::{bistable_pair, BistablePair};
pub use observables::{expect, observables, partial_trace_electron, Observables};

use crate::error::{Error, Result};
use crate::operators::{hamiltonian, ModelOperators};
use crate::params::ModelParams;
use crate::sparse::CsrMatrix;
use arnoldi::{eigs_near_shift, ArnoldiOptions, RitzPair, ShiftInvert};
use faer::{Mat, Side};
use num_complex::Complex64;

/// Default memory budget for a single exact solve (bytes).
pub const DEFAULT_MEMORY_BUDGET: u64 = 4_500_000_000;

/// Vectorized (row-stacked) Lindblad generator on a `hilbert_dim`-dimensional
/// Hilbert space.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub hilbert_dim: usize,
    pub matrix: CsrMatrix,
    pub params: Option<ModelParams>,
}

impl Liouvillian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows
    }

    /// L[X] for a dense operator X.
    pub fn apply(&self, x: &Mat<Complex64>) -> Mat<Complex64> {
        let d = self.hilbert_dim;
        let v = vectorize(x);
        unvectorize(&self.matrix.matvec(&v), d)
    }

    /// Maximum absolute column sum of the vectorized trace, i.e. how far
    /// `Tr L[X] = 0` is from holding for basis matrices.
    pub fn trace_defect(&self) -> f64 {
        let d = self.hilbert_dim;
        let mut col = vec![Complex64::new(0.0, 0.0); self.dim()];
        for i in 0..d {
            for (c, v) in self.matrix.row(i * d + i) {
                col[c] += v;
            }
        }
        col.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|r| self.matrix.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

pub fn vectorize(x: &Mat<Complex64>) -> Vec<Complex64> {
    let d = x.nrows();
    let mut v = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            v.push(x[(r, c)]);
        }
    }
    v
}

pub fn unvectorize(v: &[Complex64], d: usize) -> Mat<Complex64> {
    Mat::from_fn(d, d, |r, c| v[r * d + c])
}

/// Bytes needed to factorize and run Arnoldi on a superoperator of the given
/// dimension (empirical LU fill of the central spin Liouvillian plus the
/// Krylov basis).
pub fn estimate_memory(super_dim: usize, krylov_dim: usize) -> u64 {
    super_dim as u64 * (6_500 + 16 * krylov_dim as u64 + 400)
}

/// Jγ D[S⁻]ρ − i[H, ρ] for the homogeneous central spin model.
pub fn build_liouvillian(params: &ModelParams) -> Result<Liouvillian> {
    build_liouvillian_with_budget(params, DEFAULT_MEMORY_BUDGET)
}

pub fn build_liouvillian_with_budget(params: &ModelParams, budget: u64) -> Result<Liouvillian> {
    params.validate()?;
    let d = params.hilbert_dim();
    let required = estimate_memory(d * d, ArnoldiOptions::default().max_dim);
    if required > budget {
        return Err(Error::Resource { required, budget });
    }
    let ops = ModelOperators::new(params.twice_j);
    let h = hamiltonian(params);
    let matrix = crate::operators::lindblad_superoperator(&h, &[(params.j() * params.gamma, ops.s_minus)]);
    Ok(Liouvillian { hilbert_dim: d, matrix, params: Some(*params) })
}

/// Hermitian, unit-trace operator with the model's interleaved layout.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    pub matrix: Mat<Complex64>,
}

impl DensityOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Hermitize and normalize an arbitrary vectorized operator.
    pub fn from_vector(v: &[Complex64], d: usize) -> Result<Self> {
        let x = unvectorize(v, d);
        let h = hermitian_part(&x);
        let tr = trace(&h).re;
        if !(tr.abs() > 1e-300) {
            return Err(Error::Numerical("null vector has zero trace".into()));
        }
        Ok(DensityOperator { matrix: Mat::from_fn(d, d, |r, c| h[(r, c)] / tr) })
    }

    pub fn pure(psi: &[Complex64]) -> Self {
        let d = psi.len();
        DensityOperator { matrix: Mat::from_fn(d, d, |r, c| psi[r] * psi[c].conj()) }
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.matrix)
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut e: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                e = e.max((self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm());
            }
        }
        e
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut p = 0.0;
        for r in 0..d {
            for c in 0..d {
                p += self.matrix[(r, c)].norm_sqr();
            }
        }
        p
    }
}

pub fn trace(x: &Mat<Complex64>) -> Complex64 {
    (0..x.nrows()).map(|i| x[(i, i)]).sum()
}

pub fn hermitian_part(x: &Mat<Complex64>) -> Mat<Complex64> {
    let d = x.nrows();
    Mat::from_fn(d, d, |r, c| 0.5 * (x[(r, c)] + x[(c, r)].conj()))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(x: &Mat<Complex64>) -> Vec<f64> {
    x.self_adjoint_eigenvalues(Side::Lower).expect("Hermitian eigenvalues")
}

/// Uhlmann fidelity (Tr √(√ρ σ √ρ))².
pub fn fidelity(rho: &Mat<Complex64>, sigma: &Mat<Complex64>) -> Result<f64> {
    let evd = hermitian_part(rho)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    let (u, s) = (evd.U(), evd.S());
    let d = rho.nrows();
    let sq: Vec<f64> = (0..d).map(|i| s[i].re.max(0.0).sqrt()).collect();
    let root = Mat::from_fn(d, d, |r, c| (0..d).map(|k| u[(r, k)] * sq[k] * u[(c, k)].conj()).sum::<Complex64>());
    let inner = &root * sigma * &root;
    let f: f64 = hermitian_eigenvalues(&hermitian_part(&inner)).iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok(f * f)
}

/// Trace distance ½‖ρ − σ‖₁.
pub fn trace_distance(rho: &Mat<Complex64>, sigma: &Mat<Complex64>) -> f64 {
    let d = rho.nrows();
    let diff = Mat::from_fn(d, d, |r, c| rho[(r, c)] - sigma[(r, c)]);
    0.5 * hermitian_eigenvalues(&hermitian_part(&diff)).iter().map(|x| x.abs()).sum::<f64>()
}

/// Solver knobs for the exact stack.
#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    /// Real shift σ of the shift-invert transformation (units of a).
    pub shift: f64,
    /// Eigenvalues with |λ| ≤ null_tol count as null space.
    pub null_tol: f64,
    /// Number of eigenpairs closest to the shift that are converged.
    pub nev: usize,
    pub arnoldi: ArnoldiOptions,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { shift: 0.02, null_tol: 1e-8, nev: 16, arnoldi: ArnoldiOptions::default() }
    }
}

/// Eigenvalues of largest real part plus the asymptotic decay rate.
#[derive(Debug, Clone)]
pub struct SpectrumSlice {
    /// Sorted by descending real part.
    pub eigenvalues: Vec<Complex64>,
    /// Largest-real-part eigenvalue with |λ| > null_tol.
    pub adr: Complex64,
    pub null_multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityOperator,
    /// ‖L vec(ρ)‖₂ for the trace-normalized state.
    pub residual: f64,
    pub null_multiplicity: usize,
}

/// Everything obtained from one factorization of `L − σ`.
#[derive(Debug, Clone)]
pub struct ExactAnalysis {
    pub spectrum: SpectrumSlice,
    pub steady: SteadyState,
    /// Eigenpairs sorted by descending real part; the null pair is first.
    pub pairs: Vec<RitzPair>,
}

fn residual_norm(l: &Liouvillian, rho: &DensityOperator) -> f64 {
    let r = l.matrix.matvec(&vectorize(&rho.matrix));
    r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Steady state via the trace-constrained linear system: the first row of L
/// is replaced by the trace functional.
pub fn steady_state_direct(l: &Liouvillian) -> Result<DensityOperator> {
    let d = l.hilbert_dim;
    let n = l.dim();
    let mut t: Vec<(usize, usize, Complex64)> = l.matrix.triplets().filter(|&(r, _, _)| r != 0).collect();
    for i in 0..d {
        t.push((0, i * d + i, Complex64::new(1.0, 0.0)));
    }
    let a = CsrMatrix::from_triplets(n, n, t);
    let op = ShiftInvert::new(&a, Complex64::new(0.0, 0.0))?;
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    b[0] = Complex64::new(1.0, 0.0);
    DensityOperator::from_vector(&op.apply(&b), d)
}

pub fn analyze(l: &Liouvillian, opts: &ExactOptions) -> Result<ExactAnalysis> {
    let op = ShiftInvert::new(&l.matrix, Complex64::new(opts.shift, 0.0))?;
    let mut pairs = eigs_near_shift(&op, opts.nev.min(l.dim()), &opts.arnoldi)?;
    drop(op);
    pairs.sort_by(|a, b| b.lambda.re.total_cmp(&a.lambda.re));
    let null_idx = pairs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.lambda.norm().total_cmp(&b.1.lambda.norm()))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Numerical("empty spectrum".into()))?;
    let null = pairs.remove(null_idx);
    pairs.insert(0, null);
    let eigenvalues: Vec<Complex64> = pairs.iter().map(|p| p.lambda).collect();
    let null_multiplicity = eigenvalues.iter().filter(|z| z.norm() <= opts.null_tol).count().max(1);
    let adr = eigenvalues[1..]
        .iter()
        .filter(|z| z.norm() > opts.null_tol)
        .copied()
        .max_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
        .map(|z| Complex64::new(z.re, z.im.abs()))
        .unwrap_or(Complex64::new(f64::NEG_INFINITY, 0.0));
    let mut sorted = eigenvalues.clone();
    sorted.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));

    let d = l.hilbert_dim;
    let mut rho = DensityOperator::from_vector(&pairs[0].vector, d)?;
    let mut residual = residual_norm(l, &rho);
    if residual > opts.null_tol {
        let direct = steady_state_direct(l)?;
        let r = residual_norm(l, &direct);
        if r < residual {
            rho = direct;
            residual = r;
        }
    }
    Ok(ExactAnalysis {
        spectrum: SpectrumSlice { eigenvalues: sorted, adr, null_multiplicity },
        steady: SteadyState { rho, residual, null_multiplicity },
        pairs,
    })
}

/// Steady state ρ₀ with ‖L ρ₀‖ checked against `null_tol`.
pub fn steady_state(l: &Liouvillian, null_tol: f64) -> Result<SteadyState> {
    let opts = ExactOptions { null_tol, ..ExactOptions::default() };
    let scale = l.norm_inf().max(1.0);
    let steady = match analyze(l, &opts) {
        Ok(a) => a.steady,
        // clustered near-null spectra (e.g. dark states) can stall Arnoldi
        Err(Error::Convergence { .. }) => {
            let rho = steady_state_direct(l)?;
            let residual = residual_norm(l, &rho);
            SteadyState { rho, residual, null_multiplicity: 1 }
        }
        Err(e) => return Err(e),
    };
    if steady.residual > null_tol * scale {
        return Err(Error::Convergence { iterations: opts.arnoldi.max_dim, residual: steady.residual });
    }
    Ok(steady)
}

/// The `k` eigenvalues of largest real part.
pub fn low_spectrum(l: &Liouvillian, k: usize) -> Result<SpectrumSlice> {
    if k < 2 {
        return Err(Error::Precondition("need at least two eigenvalues".into()));
    }
    let opts = ExactOptions { nev: (2 * k + 4).max(16), ..ExactOptions::default() };
    let mut s = analyze(l, &opts)?.spectrum;
    s.eigenvalues.truncate(k);
    Ok(s)
}
