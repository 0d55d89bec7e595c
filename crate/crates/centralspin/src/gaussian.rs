//! Gaussian fluctuations of the nuclear mode around a semiclassical root.
//!
//! The electron is eliminated to second order: its steady-state moments and
//! integrated autocorrelations (quantum regression with the optical Bloch
//! matrix ℳ) give the coefficients of a quadratic bosonic master equation
//! for the fluctuation mode `b`. From it follow the drift matrix Σ, the
//! steady covariance matrix and the squeezing witness.

use crate::error::{Error, Result};
use crate::params::{beta_to_polarization, ModelParams};
use crate::semiclassical::{bloch_steady, ElectronSteady};
use nalgebra::{Matrix2, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

/// Assembly refuses displacements with k = 2 − |β|² below this value.
pub const K_FLOOR: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Optical Bloch matrix acting on (ΔS⁺, ΔS⁻, ΔS_z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMatrix {
    pub m: Matrix3<Complex64>,
}

pub fn bloch_matrix(beta: Complex64, p: &ModelParams) -> Result<BlochMatrix> {
    let e = bloch_steady(beta, p)?;
    Ok(bloch_matrix_from(&e, p))
}

fn bloch_matrix_from(e: &ElectronSteady, p: &ModelParams) -> BlochMatrix {
    let (a, g) = (p.a, p.gamma);
    let i = Complex64::i();
    let ot = e.omega_tilde;
    let z = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix3::new(
        -(g / 2.0 - i * a * e.jz0), z, -2.0 * i * ot.conj(),
        z, -(g / 2.0 + i * a * e.jz0), 2.0 * i * ot,
        -i * ot, i * ot.conj(), c(-g, 0.0),
    );
    BlochMatrix { m }
}

/// Electron steady state as a 2×2 density matrix in the basis (↓, ↑).
pub fn electron_density(e: &ElectronSteady) -> Matrix2<Complex64> {
    Matrix2::new(c(1.0 - e.p_up, 0.0), e.s_plus, e.s_minus(), c(e.p_up, 0.0))
}

/// (S⁺, S⁻, S_z) as 2×2 matrices in the basis (↓, ↑).
pub fn electron_operators() -> [Matrix2<Complex64>; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    [
        Matrix2::new(z, z, one, z),
        Matrix2::new(z, one, z, z),
        Matrix2::new(c(-0.5, 0.0), z, z, c(0.5, 0.0)),
    ]
}

/// S_ij = ⟨ΔS_i ΔS_j†⟩_ss for (S⁺, S⁻, S_z).
pub fn steady_correlation_matrix(beta: Complex64, p: &ModelParams) -> Result<Matrix3<Complex64>> {
    let e = bloch_steady(beta, p)?;
    Ok(correlation_from(&e))
}

fn correlation_from(e: &ElectronSteady) -> Matrix3<Complex64> {
    let rho = electron_density(e);
    let ops = electron_operators();
    let mean: Vec<Complex64> = ops.iter().map(|o| (rho * o).trace()).collect();
    Matrix3::from_fn(|i, j| (rho * ops[i] * ops[j].adjoint()).trace() - mean[i] * mean[j].conj())
}

/// F₁ = −ℳ⁻¹S = ∫₀^∞ e^{ℳt} S dt and F₂ = F₁†.
pub fn integrated_correlations(
    m: &BlochMatrix,
    s: &Matrix3<Complex64>,
) -> Result<(Matrix3<Complex64>, Matrix3<Complex64>)> {
    let lu = m.m.lu();
    let f1 = -lu
        .solve(s)
        .ok_or_else(|| Error::Numerical("Bloch matrix is singular".into()))?;
    Ok((f1, f1.adjoint()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoefficients {
    pub b: Complex64,
    pub f: f64,
    pub r_a: f64,
    pub i_a: f64,
    pub r_b: f64,
    pub i_b: f64,
    pub c: Complex64,
    pub alpha: Complex64,
    pub chi: f64,
    pub xi: Complex64,
}

/// Coupling vectors (v, w) of the electron fluctuations to A, such that
/// ∫⟨A†(t)A⟩ = w†F₁w and ∫⟨A(t)A†⟩ = v†F₁v.
pub fn coupling_vectors(beta: Complex64, p: &ModelParams) -> (Vector3<Complex64>, Vector3<Complex64>) {
    let a = p.a;
    let b2 = beta.norm_sqr();
    let k = 2.0 - b2;
    let sk = k.sqrt();
    let diag = a * (2.0 * k - b2) / (4.0 * sk);
    let v = Vector3::new(c(diag, 0.0), -a * beta * beta / (4.0 * sk), beta * a);
    let w = Vector3::new(-a * beta.conj() * beta.conj() / (4.0 * sk), c(diag, 0.0), beta.conj() * a);
    (v, w)
}

fn quad(x: &Vector3<Complex64>, f: &Matrix3<Complex64>, y: &Vector3<Complex64>) -> Complex64 {
    (x.adjoint() * f * y)[(0, 0)]
}

pub fn coefficients(beta: Complex64, p: &ModelParams) -> Result<EffectiveCoefficients> {
    let e = bloch_steady(beta, p)?;
    if e.k < K_FLOOR {
        return Err(Error::Singular(format!("k = {:.3e} below the expansion floor", e.k)));
    }
    let bm = bloch_matrix_from(&e, p);
    let s = correlation_from(&e);
    let (f1, f2) = integrated_correlations(&bm, &s)?;
    let (v, w) = coupling_vectors(beta, p);

    let adag_a = quad(&w, &f1, &w);
    let a_adag = quad(&v, &f1, &v);
    let aa_t = quad(&v, &f1, &w);
    let aa_0t = quad(&v, &f2, &w);

    let a = p.a;
    let b2 = beta.norm_sqr();
    let k3 = e.k.powf(1.5);
    let bb = -a * beta / (16.0 * k3) * ((4.0 * e.k + b2) * e.s_minus() + beta * beta * e.s_plus);
    let ff = -a / (8.0 * k3) * (4.0 * e.k + b2) * (beta * e.s_plus + beta.conj() * e.s_minus()).re
        + a * (e.p_up + p.delta_omega() / a);
    let alpha = (aa_t - aa_0t) / c(0.0, 2.0);
    Ok(EffectiveCoefficients {
        b: bb,
        f: ff,
        r_a: adag_a.re,
        i_a: adag_a.im,
        r_b: a_adag.re,
        i_b: a_adag.im,
        c: aa_t + aa_0t,
        alpha,
        chi: adag_a.im + a_adag.im + ff,
        xi: alpha.conj() + bb,
    })
}

/// Linear dynamics of (⟨b⟩, ⟨b†⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub sigma: Matrix2<Complex64>,
    /// Sorted by descending real part.
    pub eigenvalues: [Complex64; 2],
    /// χ² < 4|ξ|²: both eigenvalues real (overdamped mode).
    pub overdamped: bool,
}

impl DriftMatrix {
    pub fn stable(&self) -> bool {
        self.eigenvalues.iter().all(|l| l.re < 0.0)
    }

    /// Eigenvalue with the largest real part (perturbative asymptotic decay
    /// rate when the root is stable); the member with Im ≥ 0 of a complex pair.
    pub fn adr(&self) -> Complex64 {
        let [l0, l1] = self.eigenvalues;
        if (l0.re - l1.re).abs() <= 1e-12 * (1.0 + l0.norm()) {
            Complex64::new(l0.re, l0.im.abs())
        } else {
            l0
        }
    }
}

pub fn drift_and_stability(co: &EffectiveCoefficients) -> DriftMatrix {
    let g = co.r_a - co.r_b;
    let i = Complex64::i();
    let sigma = Matrix2::new(-g - i * co.chi, -2.0 * i * co.xi, 2.0 * i * co.xi.conj(), -g + i * co.chi);
    // −g ± √(4|ξ|² − χ²)
    let disc = Complex64::new(4.0 * co.xi.norm_sqr() - co.chi * co.chi, 0.0).sqrt();
    let mut ev = [c(-g, 0.0) + disc, c(-g, 0.0) - disc];
    ev.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    DriftMatrix { sigma, eigenvalues: ev, overdamped: co.chi * co.chi < 4.0 * co.xi.norm_sqr() }
}

/// Steady second moments n = ⟨b†b⟩, m = ⟨b²⟩ of the fluctuation mode and the
/// derived covariance invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceSummary {
    pub n: f64,
    pub m: Complex64,
    /// Γ = [[2Re m + 2n + 1, 2Im m], [2Im m, 2n + 1 − 2Re m]] (vacuum = identity).
    pub gamma_cm: Matrix2<f64>,
    /// D = √det Γ (symplectic eigenvalue).
    pub d_purity: f64,
    /// Squeezing factor M = √(λ_max/λ_min) of Γ.
    pub m_squeeze: f64,
    pub t_eff: f64,
    pub lambda_min: f64,
}

impl CovarianceSummary {
    /// Smallest eigenvalue of Γ + iΩ (Ω the symplectic form); ≥ 0 for a
    /// physical state.
    pub fn uncertainty_margin(&self) -> f64 {
        let g = self.gamma_cm;
        let h = Matrix2::new(c(g[(0, 0)], 0.0), c(g[(0, 1)], 1.0), c(g[(1, 0)], -1.0), c(g[(1, 1)], 0.0));
        let tr = (h[(0, 0)] + h[(1, 1)]).re;
        let det = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re;
        0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt())
    }
}

/// Time derivatives (dn/dt, dm/dt) of the second moments under the
/// quadratic master equation.
pub fn moment_flow(co: &EffectiveCoefficients, n: f64, m: Complex64) -> (f64, Complex64) {
    let g = co.r_a - co.r_b;
    let i = Complex64::i();
    let xi = co.xi;
    let dn = -2.0 * g * n + 2.0 * co.r_b + (2.0 * i * xi.conj() * m - 2.0 * i * xi * m.conj()).re;
    let dm = -2.0 * g * m - 2.0 * i * co.chi * m - 2.0 * i * xi * (2.0 * n + 1.0) - co.c.conj();
    (dn, dm)
}

/// T_eff = 1/ln(2/(√D − 1) + 1); zero for a pure state.
pub fn effective_temperature(d: f64) -> f64 {
    let s = d.max(1.0).sqrt();
    if s - 1.0 <= 1e-14 {
        return 0.0;
    }
    1.0 / (2.0 / (s - 1.0) + 1.0).ln()
}

pub fn covariance_steady(co: &EffectiveCoefficients) -> Result<CovarianceSummary> {
    if !drift_and_stability(co).stable() {
        return Err(Error::Precondition("unstable drift has no steady covariance".into()));
    }
    // The flow is affine in the real unknowns (n, Re m, Im m).
    let f = |x: [f64; 3]| {
        let (dn, dm) = moment_flow(co, x[0], c(x[1], x[2]));
        [dn, dm.re, dm.im]
    };
    let b0 = f([0.0; 3]);
    let mut a = nalgebra::Matrix3::<f64>::zeros();
    for col in 0..3 {
        let mut e = [0.0; 3];
        e[col] = 1.0;
        let fe = f(e);
        for row in 0..3 {
            a[(row, col)] = fe[row] - b0[row];
        }
    }
    let x = a
        .lu()
        .solve(&nalgebra::Vector3::new(-b0[0], -b0[1], -b0[2]))
        .ok_or_else(|| Error::Numerical("singular moment flow".into()))?;
    let (n, m) = (x[0], c(x[1], x[2]));
    let gamma_cm = Matrix2::new(
        2.0 * m.re + 2.0 * n + 1.0,
        2.0 * m.im,
        2.0 * m.im,
        2.0 * n + 1.0 - 2.0 * m.re,
    );
    let det = gamma_cm.determinant();
    let d_purity = det.max(0.0).sqrt();
    let eig = SymmetricEigen::new(gamma_cm).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    Ok(CovarianceSummary {
        n,
        m,
        gamma_cm,
        d_purity,
        m_squeeze: (hi / lo).sqrt(),
        t_eff: effective_temperature(d_purity),
        lambda_min: lo,
    })
}

/// Nuclear squeezing and entanglement witness reconstructed from the
/// Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    /// C = max(0, 1 − λ_min(Q))
    pub c: f64,
    /// 2⟨ΔI_y²⟩/|⟨I⟩|
    pub xi_y2: f64,
    /// Q = (2/J) Cov(I) + ⟨I⟩⟨I⟩ᵀ/J²
    pub q: Matrix3<f64>,
    /// Cov(I)/J, symmetrized.
    pub cov_over_j: Matrix3<f64>,
}

/// Linear coefficients (on b, on b†) of the order-√J fluctuations 𝒥₁ˣ, 𝒥₁ʸ, 𝒥₁ᶻ.
fn fluctuation_operators(beta: Complex64) -> [(Complex64, Complex64); 3] {
    let b2 = beta.norm_sqr();
    let k = 2.0 - b2;
    let sk = k.sqrt();
    // 𝒥₁⁻ = p b + q b†
    let p = c((2.0 * k - b2) / (2.0 * sk), 0.0);
    let q = -beta * beta / (2.0 * sk);
    let i2 = c(0.0, 2.0);
    [
        ((q.conj() + p) / 2.0, (p.conj() + q) / 2.0),
        ((q.conj() - p) / i2, (p.conj() - q) / i2),
        (beta.conj(), beta),
    ]
}

pub fn squeezing_witness(beta: Complex64, cov: &CovarianceSummary) -> Result<Witness> {
    let j0 = beta_to_polarization(beta)?;
    let ops = fluctuation_operators(beta);
    let (n, m) = (cov.n, cov.m);
    // ⟨(x₀b + x₁b†)(y₀b + y₁b†)⟩
    let e = |x: (Complex64, Complex64), y: (Complex64, Complex64)| {
        x.0 * y.0 * m + x.0 * y.1 * (n + 1.0) + x.1 * y.0 * n + x.1 * y.1 * m.conj()
    };
    let cov_over_j = Matrix3::from_fn(|i, j| (0.5 * (e(ops[i], ops[j]) + e(ops[j], ops[i]))).re);
    let q = 2.0 * cov_over_j + j0 * j0.transpose();
    let lmin = SymmetricEigen::new(q).eigenvalues.min();
    Ok(Witness { c: (1.0 - lmin).max(0.0), xi_y2: 2.0 * cov_over_j[(1, 1)] / j0.norm(), q, cov_over_j })
}

/// Full second-order analysis of one root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationReport {
    pub coefficients: EffectiveCoefficients,
    pub drift: DriftMatrix,
    pub covariance: Option<CovarianceSummary>,
    pub witness: Option<Witness>,
    /// False when D > J/10 (fluctuations no longer small against √J).
    pub expansion_valid: bool,
}

pub fn analyze_root(beta: Complex64, p: &ModelParams, j: Option<f64>) -> Result<FluctuationReport> {
    let coefficients = coefficients(beta, p)?;
    let drift = drift_and_stability(&coefficients);
    let (covariance, witness) = if drift.stable() {
        let cov = covariance_steady(&coefficients)?;
        (Some(cov), Some(squeezing_witness(beta, &cov)?))
    } else {
        (None, None)
    };
    let expansion_valid = match (j, covariance) {
        (Some(j), Some(cv)) => cv.d_purity <= j / 10.0,
        _ => true,
    };
    Ok(FluctuationReport { coefficients, drift, covariance, witness, expansion_valid })
}

/// Mean-field electron and nuclear moments in the thermodynamic limit.
pub fn first_moments(beta: Complex64, p: &ModelParams) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let e = bloch_steady(beta, p)?;
    Ok((e.vector(), beta_to_polarization(beta)?))
}
