//! Spin-pumping speed: time for an initial state to reach 99 % fidelity
//! with the steady state, relative to the undriven (Ω = 0) case.

use crate::error::{Error, Result};
use crate::exact::arnoldi::ShiftInvert;
use crate::exact::{analyze, build_liouvillian, fidelity, vectorize, DensityOperator, ExactOptions};
use crate::params::ModelParams;
use crate::sparse::CsrMatrix;
use faer::Mat;
use num_complex::Complex64;

pub const TARGET_FIDELITY: f64 = 0.99;
/// Largest J for time propagation.
pub const MAX_PROPAGATION_TWICE_J: u32 = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Identity / dim.
    Mixed,
    /// Electron ↓, nuclei in |J, +J⟩.
    PolarizedUp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeMethod {
    /// L-stable SDIRK integration of ρ̇ = Lρ until the fidelity threshold.
    Propagation,
    /// Single slowest-mode estimate ln(1/(1 − F))/|Re λ_ADR|.
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpProbe {
    pub time: f64,
    pub baseline_time: f64,
    /// baseline_time / time
    pub speedup: f64,
    pub adr: Complex64,
    pub baseline_adr: Complex64,
    pub method: ProbeMethod,
}

fn initial_rho(d: usize, init: InitialState) -> Mat<Complex64> {
    match init {
        InitialState::Mixed => Mat::from_fn(d, d, |r, c| if r == c { Complex64::new(1.0 / d as f64, 0.0) } else { Complex64::new(0.0, 0.0) }),
        InitialState::PolarizedUp => {
            // interleaved index 2n + s; n = 2J is m = +J, s = 0 is ↓
            let k = d - 2;
            Mat::from_fn(d, d, |r, c| if r == k && c == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
        }
    }
}

/// Relaxation time and ADR at one parameter point.
pub fn relaxation_time(p: &ModelParams, init: InitialState, method: ProbeMethod) -> Result<(f64, Complex64)> {
    let l = build_liouvillian(p)?;
    let an = analyze(&l, &ExactOptions::default())?;
    let adr = an.spectrum.adr;
    if !(adr.re < 0.0) {
        return Err(Error::Convergence { iterations: 0, residual: adr.re });
    }
    let time = match method {
        ProbeMethod::Spectral => (1.0 / (1.0 - TARGET_FIDELITY)).ln() / adr.re.abs(),
        ProbeMethod::Propagation => {
            if p.twice_j > MAX_PROPAGATION_TWICE_J {
                return Err(Error::Precondition(format!("propagation limited to J <= {}", MAX_PROPAGATION_TWICE_J / 2)));
            }
            propagate(&l.matrix, l.hilbert_dim, &an.steady.rho, init, adr.re.abs(), p.a)?
        }
    };
    Ok((time, adr))
}

/// Alexander's two-stage L-stable SDIRK with one factorization of 1 − γh L.
fn propagate(l: &CsrMatrix, d: usize, rho_ss: &DensityOperator, init: InitialState, rate: f64, a: f64) -> Result<f64> {
    let g = 1.0 - 0.5f64.sqrt();
    let h = (0.05 / rate).min(0.5 / a);
    let n = l.nrows;
    let m = CsrMatrix::identity(n).add(&l.scale(Complex64::new(-g * h, 0.0)));
    let solver = ShiftInvert::new(&m, Complex64::new(0.0, 0.0))?;
    let mut y = vectorize(&initial_rho(d, init));
    let fid = |y: &[Complex64]| -> Result<f64> {
        let rho = DensityOperator::from_vector(y, d)?;
        fidelity(&rho.matrix, &rho_ss.matrix)
    };
    let mut f_prev = fid(&y)?;
    if f_prev >= TARGET_FIDELITY {
        return Ok(0.0);
    }
    let max_steps = 200_000;
    for step in 0..max_steps {
        let k1 = solver.apply(&l.matvec(&y));
        let y1: Vec<Complex64> = y.iter().zip(&k1).map(|(a, b)| a + b * ((1.0 - g) * h)).collect();
        let k2 = solver.apply(&l.matvec(&y1));
        for i in 0..n {
            y[i] += (k1[i] * (1.0 - g) + k2[i] * g) * h;
        }
        let f = fid(&y)?;
        if f >= TARGET_FIDELITY {
            let frac = (TARGET_FIDELITY - f_prev) / (f - f_prev);
            return Ok((step as f64 + frac) * h);
        }
        f_prev = f;
    }
    Err(Error::Convergence { iterations: max_steps, residual: 1.0 - f_prev })
}

/// Relaxation time at `p` compared with the same point at Ω = 0.
pub fn spin_pumping_rate_probe(p: &ModelParams, init: InitialState, method: ProbeMethod) -> Result<PumpProbe> {
    let (time, adr) = relaxation_time(p, init, method)?;
    let (baseline_time, baseline_adr) = relaxation_time(&p.with_drive(0.0), init, method)?;
    Ok(PumpProbe { time, baseline_time, speedup: baseline_time / time, adr, baseline_adr, method })
}
