//! Closed-form reference results: the dark-state segment ω = ω₀, Ω ≤ Ω₀,
//! approximate eigenstates of the collective lowering operator, the
//! strong-dissipation reduced model and the critical-point check.

use crate::error::{Error, Result};
use crate::exact::Liouvillian;
use crate::gaussian::{coefficients, drift_and_stability, EffectiveCoefficients};
use crate::operators::{lindblad_superoperator, SpinOps};
use crate::params::ModelParams;
use crate::sparse::CsrMatrix;
use num_complex::Complex64;
use serde::Serialize;

/// Exact thermodynamic-limit solution on the dark-state segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentXSolution {
    /// Normal root −√(1 − √(1 − (Ω/Ω₀)²)).
    pub beta_minus: f64,
    /// Anomalous root −√(1 + √(1 − (Ω/Ω₀)²)).
    pub beta_plus: f64,
    pub gamma_eff: f64,
    pub theta_eff: f64,
    /// 2⟨ΔI_y²⟩/|⟨I⟩| = √(1 − (Ω/Ω₀)²)
    pub xi_y2: f64,
    /// d = μb + νb† at the normal root (infinite at Ω = Ω₀).
    pub mu: f64,
    pub nu: f64,
    pub r: f64,
}

fn on_segment(p: &ModelParams) -> Result<f64> {
    if (p.omega - p.omega0()).abs() > 1e-12 * p.a {
        return Err(Error::OutOfSegment(format!("segment x requires omega = omega0, got omega/omega0 = {}", p.omega_ratio())));
    }
    let x = p.drive_ratio();
    if x < 0.0 || x > 1.0 + 1e-12 {
        return Err(Error::OutOfSegment(format!(
            "this solution is only available if Omega <= Omega0 (Omega/Omega0 = {x})"
        )));
    }
    Ok(x.min(1.0))
}

/// μ, ν and r of the squeezed mode d for a real normal-branch displacement.
pub fn squeeze_parameters(beta: f64) -> (f64, f64, f64) {
    let b2 = beta * beta;
    let k = 2.0 - b2;
    let den = 2.0 * (2.0 * k * (1.0 - b2)).sqrt();
    if den == 0.0 {
        return (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
    }
    let mu = (2.0 * k - b2) / den;
    let nu = -b2 / den;
    (mu, nu, mu.acosh())
}

pub fn segment_x(p: &ModelParams) -> Result<SegmentXSolution> {
    let x = on_segment(p)?;
    let s = (1.0 - x * x).max(0.0).sqrt();
    let a = p.a;
    let z = 1.0 / Complex64::new(p.gamma, -2.0 * a * s);
    let beta_minus = -(1.0 - s).sqrt();
    let (mu, nu, r) = squeeze_parameters(beta_minus);
    Ok(SegmentXSolution {
        beta_minus,
        beta_plus: -(1.0 + s).sqrt(),
        gamma_eff: 2.0 * a * a * z.re * s,
        theta_eff: a * a * z.im * s,
        xi_y2: s,
        mu,
        nu,
        r,
    })
}

/// Near-critical form Γ_eff ≈ (2a²/γ)√(1 − (Ω/Ω₀)²).
pub fn gamma_eff_asymptotic(p: &ModelParams) -> Result<f64> {
    let x = on_segment(p)?;
    Ok(2.0 * p.a * p.a / p.gamma * (1.0 - x * x).sqrt())
}

/// Near-critical form |Θ_eff| ≈ (2a³/γ²)(1 − (Ω/Ω₀)²).
pub fn theta_eff_asymptotic(p: &ModelParams) -> Result<f64> {
    let x = on_segment(p)?;
    Ok(2.0 * p.a.powi(3) / (p.gamma * p.gamma) * (1.0 - x * x))
}

/// Approximate eigenstate of I⁻ with eigenvalue ≈ J√k β.
#[derive(Debug, Clone)]
pub struct LoweringState {
    /// Amplitudes on |J, m⟩, m = −J..J.
    pub vector: Vec<Complex64>,
    pub eigenvalue: f64,
    /// Weight that the same construction in a larger bosonic space puts
    /// above m = +J.
    pub truncation_loss: f64,
}

/// b (annihilation) on the first `n` Fock states.
fn boson_lower(n: usize) -> CsrMatrix {
    let t = (1..n).map(|k| (k - 1, k, Complex64::new((k as f64).sqrt(), 0.0))).collect();
    CsrMatrix::from_triplets(n, n, t)
}

/// exp(G)v for sparse G by scaled Taylor series.
fn expm_apply(g: &CsrMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let norm1 = (0..g.nrows)
        .map(|r| g.row(r).map(|(_, x)| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let steps = norm1.ceil().max(1.0) as usize;
    let h = Complex64::new(1.0 / steps as f64, 0.0);
    let mut x = v.to_vec();
    for _ in 0..steps {
        let mut term = x.clone();
        let mut acc = x.clone();
        for k in 1..60 {
            term = g.matvec(&term);
            let f = h / k as f64;
            term.iter_mut().for_each(|t| *t *= f);
            acc.iter_mut().zip(&term).for_each(|(a, t)| *a += t);
            if term.iter().map(|t| t.norm_sqr()).sum::<f64>().sqrt() < 1e-17 {
                break;
            }
        }
        x = acc;
    }
    x
}

/// D(√J β) S(r′)|0⟩ on `n` Fock states, with S(r′) = exp(r′(b² − b†²)/2)
/// and tanh r′ = ν/μ so that the state is the vacuum of d = μb + νb†.
fn displaced_squeezed(n: usize, j: f64, beta: f64) -> Vec<Complex64> {
    let b = boson_lower(n);
    let bd = b.adjoint();
    let (mu, nu, _) = squeeze_parameters(beta);
    let rp = (nu / mu).atanh();
    let b2 = b.matmul(&b);
    let bd2 = bd.matmul(&bd);
    let gs = b2.add(&bd2.scale(Complex64::new(-1.0, 0.0))).scale(Complex64::new(0.5 * rp, 0.0));
    let amp = j.sqrt() * beta;
    let gd = bd.add(&b.scale(Complex64::new(-1.0, 0.0))).scale(Complex64::new(amp, 0.0));
    let mut vac = vec![Complex64::new(0.0, 0.0); n];
    vac[0] = Complex64::new(1.0, 0.0);
    expm_apply(&gd, &expm_apply(&gs, &vac))
}

pub fn lowering_eigenstate(twice_j: u32, beta: f64) -> Result<LoweringState> {
    if twice_j < 2 {
        return Err(Error::Domain("lowering eigenstates need J >= 1".into()));
    }
    if !(beta > -1.0 && beta <= 0.0) {
        return Err(Error::Domain(format!("beta = {beta} outside (-1, 0]")));
    }
    let n = twice_j as usize + 1;
    let j = twice_j as f64 / 2.0;
    let pad = n + 40;
    let wide = displaced_squeezed(pad, j, beta);
    let truncation_loss: f64 = wide[n..].iter().map(|x| x.norm_sqr()).sum::<f64>()
        / wide.iter().map(|x| x.norm_sqr()).sum::<f64>();
    if truncation_loss > 1e-6 {
        return Err(Error::Truncation { loss: truncation_loss });
    }
    let mut vector = displaced_squeezed(n, j, beta);
    let nv = vector.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    vector.iter_mut().for_each(|x| *x /= nv);
    let k = 2.0 - beta * beta;
    Ok(LoweringState { vector, eigenvalue: j * k.sqrt() * beta, truncation_loss })
}

/// ‖I⁻ψ − αψ‖ for a nuclear state ψ.
pub fn lowering_residual(twice_j: u32, psi: &[Complex64], alpha: Complex64) -> f64 {
    let ops = SpinOps::new(twice_j);
    let lp = ops.lower.matvec(psi);
    lp.iter().zip(psi).map(|(x, y)| (x - alpha * y).norm_sqr()).sum::<f64>().sqrt()
}

/// Nuclear-only model obtained by adiabatic elimination of a strongly
/// damped electron.
#[derive(Debug, Clone)]
pub struct ReducedModel {
    pub liouvillian: Liouvillian,
    pub gamma_eff: f64,
    pub omega_eff: f64,
    /// γ < 10a: outside the regime where the reduction is accurate.
    pub weak_damping: bool,
}

/// σ̇ = γ_eff D[I⁻]σ − i[Ω_eff I_y + δω I_z, σ].
///
/// The electron decays at Jγ and is driven with JΩ, so eliminating it gives
/// γ_eff = a²/(Jγ) and Ω_eff = 2aΩ/γ (equivalently γ_eff D[I⁻ + 2JΩ/a]).
pub fn strong_dissipation_model(p: &ModelParams) -> Result<ReducedModel> {
    p.validate()?;
    let j = p.j();
    let gamma_eff = p.a * p.a / (j * p.gamma);
    let omega_eff = 2.0 * p.a * p.omega_drive / p.gamma;
    let ops = SpinOps::new(p.twice_j);
    let h = ops.y().scale(Complex64::new(omega_eff, 0.0)).add(&ops.z.scale(Complex64::new(p.delta_omega(), 0.0)));
    let matrix = lindblad_superoperator(&h, &[(gamma_eff, ops.lower.clone())]);
    Ok(ReducedModel {
        liouvillian: Liouvillian { hilbert_dim: ops.dim(), matrix, params: None },
        gamma_eff,
        omega_eff,
        weak_damping: p.gamma < 10.0 * p.a,
    })
}

/// Comparison of the fluctuation master equation at (ω₀, Ω₀) with the pure
/// p̂-dephasing form (a²/2γ) D[p̂].
#[derive(Debug, Clone, Copy)]
pub struct CriticalModeReport {
    pub coefficients: EffectiveCoefficients,
    /// Rate of the single Hermitian Lindblad operator p̂ (= 4R_a).
    pub lindblad_rate: f64,
    pub expected_rate: f64,
    /// |R_a − R_b| + |c + 2R_a|: deviation from a single p̂ jump operator.
    pub dissipator_deviation: f64,
    /// |χ| + 2|ξ|: size of the remaining Hamiltonian part.
    pub hamiltonian_norm: f64,
    pub drift_eigenvalues: [Complex64; 2],
}

pub fn critical_mode_check(p: &ModelParams) -> Result<CriticalModeReport> {
    if (p.omega_ratio() - 1.0).abs() > 1e-12 || (p.drive_ratio() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition("critical point requires omega = omega0 and Omega = Omega0".into()));
    }
    let co = coefficients(Complex64::new(-1.0, 0.0), p)?;
    let drift = drift_and_stability(&co);
    Ok(CriticalModeReport {
        coefficients: co,
        lindblad_rate: 4.0 * co.r_a,
        expected_rate: p.a * p.a / (2.0 * p.gamma),
        dissipator_deviation: (co.r_a - co.r_b).abs() + (co.c + 2.0 * co.r_a).norm(),
        hamiltonian_norm: co.chi.abs() + 2.0 * co.xi.norm(),
        drift_eigenvalues: drift.eigenvalues,
    })
}
