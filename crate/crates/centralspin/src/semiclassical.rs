//! Self-consistent semiclassical displacements √J β of the nuclear mode.
//!
//! For a given β the electron relaxes to the steady state of its optical
//! Bloch equations in the Overhauser field; β is a fixed point when the
//! first-order drive of the nuclear fluctuations, ⟨A⟩_ss, vanishes.

use crate::error::{Error, Result};
use crate::params::{beta_to_polarization, ModelParams};
use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Electron steady state of ℒ₀ for a fixed displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronSteady {
    pub s_plus: Complex64,
    pub s_z: f64,
    /// ⟨S⁺S⁻⟩ = ⟨S_z⟩ + ½
    pub p_up: f64,
    /// Ω̃ = Ω + (a/2)√k β
    pub omega_tilde: Complex64,
    /// 𝒥₀ᶻ = |β|² − 1
    pub jz0: f64,
    pub k: f64,
}

impl ElectronSteady {
    pub fn s_minus(&self) -> Complex64 {
        self.s_plus.conj()
    }

    pub fn vector(&self) -> Vector3<f64> {
        Vector3::new(self.s_plus.re, self.s_plus.im, self.s_z)
    }
}

fn check_domain(beta: Complex64) -> Result<f64> {
    let b2 = beta.norm_sqr();
    if !(b2 <= 2.0 + 1e-12) || !b2.is_finite() {
        return Err(Error::Domain(format!("|beta|^2 = {b2} outside [0, 2]")));
    }
    Ok((2.0 - b2).max(0.0))
}

pub fn bloch_steady(beta: Complex64, p: &ModelParams) -> Result<ElectronSteady> {
    let k = check_domain(beta)?;
    let (a, g) = (p.a, p.gamma);
    let jz0 = beta.norm_sqr() - 1.0;
    let ot = p.omega_drive + 0.5 * a * k.sqrt() * beta;
    let damp = g * g + 4.0 * a * a * jz0 * jz0;
    let den = damp + 8.0 * ot.norm_sqr();
    let i = Complex64::i();
    let s_plus = 2.0 * i * ot.conj() * (g + 2.0 * i * a * jz0) / den;
    let s_z = -0.5 * damp / den;
    Ok(ElectronSteady { s_plus, s_z, p_up: s_z + 0.5, omega_tilde: ot, jz0, k })
}

/// ⟨A⟩_ss = β*(a⟨S⁺S⁻⟩ + δω) + a/(4√k)[(2k − |β|²)⟨S⁺⟩ − β*²⟨S⁻⟩].
pub fn residual(beta: Complex64, p: &ModelParams) -> Result<Complex64> {
    let e = bloch_steady(beta, p)?;
    if e.k <= 0.0 {
        return Err(Error::Singular("k = 2 - |beta|^2 vanishes".into()));
    }
    let b2 = beta.norm_sqr();
    let bc = beta.conj();
    Ok(bc * (p.a * e.p_up + p.delta_omega())
        + p.a / (4.0 * e.k.sqrt()) * ((2.0 * e.k - b2) * e.s_plus - bc * bc * e.s_minus()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Nuclear polarization along the electron pumping direction (−z).
    Normal,
    /// Polarization against the pumping direction (+z).
    Anomalous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiclassicalRoot {
    pub beta: Complex64,
    /// (⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩)_ss
    pub electron: Vector3<f64>,
    /// (𝒥₀ˣ, 𝒥₀ʸ, 𝒥₀ᶻ) = ⟨I⟩/J to leading order
    pub nuclear0: Vector3<f64>,
    pub branch: Branch,
    /// Root sits on |β|² = 2 (fully inverted nuclei); only reachable through
    /// the mean-field equations, not the reduced residual.
    pub boundary: bool,
    pub residual: f64,
    /// Filled in by the fluctuation analysis.
    pub stable: Option<bool>,
}

impl SemiclassicalRoot {
    pub fn from_beta(beta: Complex64, p: &ModelParams, equator_hint: Option<Branch>) -> Result<Self> {
        let e = bloch_steady(beta, p)?;
        let nuclear0 = beta_to_polarization(beta)?;
        let boundary = e.k < 1e-9;
        let res = if boundary { mean_field_norm(&e.vector(), &nuclear0, p) } else { residual(beta, p)?.norm() };
        Ok(SemiclassicalRoot {
            beta,
            electron: e.vector(),
            nuclear0,
            branch: label_branch(nuclear0.z, equator_hint),
            boundary,
            residual: res,
            stable: None,
        })
    }
}

pub fn label_branch(jz0: f64, equator_hint: Option<Branch>) -> Branch {
    if jz0 < -1e-9 {
        Branch::Normal
    } else if jz0 > 1e-9 {
        Branch::Anomalous
    } else {
        equator_hint.unwrap_or(Branch::Normal)
    }
}

/// Symmetry partner β' = (√k/|β|) β*, which has 𝒥₀ → (𝒥₀ˣ, −𝒥₀ʸ, −𝒥₀ᶻ).
pub fn partner(beta: Complex64) -> Complex64 {
    let b = beta.norm();
    if b == 0.0 {
        return Complex64::new(-(2.0f64.sqrt()), 0.0);
    }
    let k = (2.0 - b * b).max(0.0);
    k.sqrt() / b * beta.conj()
}

/// Residuals of the six mean-field equations: electron Bloch equations in
/// the field B = (2Ω + a𝒥₀ˣ, a𝒥₀ʸ, a𝒥₀ᶻ) and nuclear precession in
/// h = (a⟨S_x⟩, a⟨S_y⟩, a⟨S_z⟩ + ω).
pub fn mean_field_residual(s: &Vector3<f64>, j0: &Vector3<f64>, p: &ModelParams) -> [f64; 6] {
    let a = p.a;
    let b = Vector3::new(2.0 * p.omega_drive + a * j0.x, a * j0.y, a * j0.z);
    let ds = b.cross(s) - Vector3::new(0.5 * p.gamma * s.x, 0.5 * p.gamma * s.y, p.gamma * (s.z + 0.5));
    let h = Vector3::new(a * s.x, a * s.y, a * s.z + p.omega);
    let dj = h.cross(j0);
    [ds.x, ds.y, ds.z, dj.x, dj.y, dj.z]
}

fn mean_field_norm(s: &Vector3<f64>, j0: &Vector3<f64>, p: &ModelParams) -> f64 {
    mean_field_residual(s, j0, p).iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct RootSearch {
    /// Multi-start grid is `grid × grid` over the square enclosing the disc.
    pub grid: usize,
    pub max_iter: usize,
    pub accept_tol: f64,
    pub dedup: f64,
}

impl Default for RootSearch {
    fn default() -> Self {
        RootSearch { grid: 40, max_iter: 200, accept_tol: 1e-10, dedup: 1e-6 }
    }
}

const B2_MAX: f64 = 2.0 - 1e-12;

fn eval(x: [f64; 2], p: &ModelParams) -> Option<[f64; 2]> {
    let r = residual(Complex64::new(x[0], x[1]), p).ok()?;
    Some([r.re, r.im])
}

fn fnorm(f: [f64; 2]) -> f64 {
    f[0].hypot(f[1])
}

/// Damped Newton from one starting point; returns the converged β.
pub fn newton(start: Complex64, p: &ModelParams, max_iter: usize) -> Option<Complex64> {
    let mut x = [start.re, start.im];
    let mut f = eval(x, p)?;
    for _ in 0..max_iter {
        let fx = fnorm(f);
        if fx < 1e-14 {
            break;
        }
        let h = 1e-7;
        let mut jac = [[0.0; 2]; 2];
        for c in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[c] += h;
            xm[c] -= h;
            // one-sided difference next to the |β|² = 2 boundary
            let (fp, fm, hh) = match (eval(xp, p), eval(xm, p)) {
                (Some(a), Some(b)) => (a, b, 2.0 * h),
                (Some(a), None) => (a, f, h),
                (None, Some(b)) => (f, b, h),
                (None, None) => return None,
            };
            for r in 0..2 {
                jac[r][c] = (fp[r] - fm[r]) / hh;
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let dx = [
            -(jac[1][1] * f[0] - jac[0][1] * f[1]) / det,
            -(-jac[1][0] * f[0] + jac[0][0] * f[1]) / det,
        ];
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let xn = [x[0] + t * dx[0], x[1] + t * dx[1]];
            if xn[0] * xn[0] + xn[1] * xn[1] < B2_MAX {
                if let Some(fnew) = eval(xn, p) {
                    if fnorm(fnew) < fx {
                        x = xn;
                        f = fnew;
                        accepted = true;
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        if t * fnorm(dx) < 1e-15 {
            break;
        }
    }
    Some(Complex64::new(x[0], x[1]))
}

fn push_unique(roots: &mut Vec<Complex64>, b: Complex64, dedup: f64) {
    if roots.iter().all(|r| (r - b).norm() > dedup) {
        roots.push(b);
    }
}

/// All roots of ⟨A⟩_ss = 0 in the disc |β|² ≤ 2, using the default search.
pub fn find_roots(p: &ModelParams, grid_density: usize) -> Result<Vec<SemiclassicalRoot>> {
    find_roots_with(p, &RootSearch { grid: grid_density, ..RootSearch::default() }, &[], None)
}

/// Multi-start search plus optional extra seeds (e.g. the previous scan
/// point's roots). Roots are sorted by 𝒥₀ᶻ.
pub fn find_roots_with(
    p: &ModelParams,
    opts: &RootSearch,
    seeds: &[Complex64],
    equator_hint: Option<Branch>,
) -> Result<Vec<SemiclassicalRoot>> {
    p.validate()?;
    let r = 2.0f64.sqrt();
    let mut starts: Vec<Complex64> = seeds.to_vec();
    let n = opts.grid.max(1);
    for i in 0..n {
        for j in 0..n {
            let x = -r + 2.0 * r * (i as f64 + 0.5) / n as f64;
            let y = -r + 2.0 * r * (j as f64 + 0.5) / n as f64;
            if x * x + y * y < B2_MAX {
                starts.push(Complex64::new(x, y));
            }
        }
    }
    let mut found: Vec<Complex64> = vec![];
    let mut best = f64::INFINITY;
    for s in starts {
        if let Some(b) = newton(s, p, opts.max_iter) {
            let res = residual(b, p).map(|z| z.norm()).unwrap_or(f64::INFINITY);
            best = best.min(res);
            if res <= opts.accept_tol * p.a {
                push_unique(&mut found, b, opts.dedup);
            }
        }
    }
    // Partner of each root is a root too; polish it to close gaps left by the grid.
    for b in found.clone() {
        let q = partner(b);
        if q.norm_sqr() < B2_MAX {
            if let Some(qb) = newton(q, p, opts.max_iter) {
                if residual(qb, p).map(|z| z.norm()).unwrap_or(f64::INFINITY) <= opts.accept_tol * p.a {
                    push_unique(&mut found, qb, opts.dedup);
                }
            }
        }
    }
    let mut roots: Vec<SemiclassicalRoot> = found
        .into_iter()
        .map(|b| SemiclassicalRoot::from_beta(b, p, equator_hint))
        .collect::<Result<_>>()?;
    if p.omega_drive == 0.0 {
        // fully inverted nuclei: singular for the reduced residual
        let b = Complex64::new(-(2.0f64.sqrt()), 0.0);
        let root = SemiclassicalRoot::from_beta(b, p, equator_hint)?;
        if root.residual <= opts.accept_tol * p.a {
            roots.push(root);
        }
    }
    if roots.is_empty() {
        return Err(Error::NoRoots { min_residual: best });
    }
    roots.sort_by(|a, b| a.nuclear0.z.total_cmp(&b.nuclear0.z));
    Ok(roots)
}

/// Index of each root's symmetry partner within `roots`, if present.
pub fn pair_partners(roots: &[SemiclassicalRoot]) -> Vec<Option<usize>> {
    roots
        .iter()
        .map(|r| {
            let want = Vector3::new(r.nuclear0.x, -r.nuclear0.y, -r.nuclear0.z);
            roots
                .iter()
                .enumerate()
                .filter(|(_, q)| (q.nuclear0 - want).norm() < 1e-6)
                .min_by(|a, b| (a.1.nuclear0 - want).norm().total_cmp(&(b.1.nuclear0 - want).norm()))
                .map(|(i, _)| i)
        })
        .collect()
}
