use super::{
    analyze, hermitian_eigenvalues, observables, trace, unvectorize, DensityOperator, ExactOptions,
    Liouvillian,
};
use crate::error::{Error, Result};
use faer::Mat;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct BistablePair {
    pub rho_lo: DensityOperator,
    pub rho_up: DensityOperator,
    pub rho0: DensityOperator,
    /// Hermitian, traceless direction used to span the pair.
    pub rho1: Mat<Complex64>,
    pub lambda_range: (f64, f64),
    pub adr: Complex64,
}

fn combine(a: &Mat<Complex64>, b: &Mat<Complex64>, t: f64) -> Mat<Complex64> {
    let d = a.nrows();
    Mat::from_fn(d, d, |r, c| a[(r, c)] + t * b[(r, c)])
}

fn min_eig(a: &Mat<Complex64>, b: &Mat<Complex64>, t: f64) -> f64 {
    hermitian_eigenvalues(&combine(a, b, t))[0]
}

/// Largest t ≥ 0 along `dir` with min eig(ρ₀ + t·ρ₁) ≥ −pos_tol.
fn admissible_edge(rho0: &Mat<Complex64>, rho1: &Mat<Complex64>, dir: f64, pos_tol: f64) -> f64 {
    let feasible = |t: f64| min_eig(rho0, rho1, dir * t) >= -pos_tol;
    if !feasible(0.0) {
        return 0.0;
    }
    let mut hi = 1.0;
    while feasible(hi) && hi < 1e6 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn normalized(x: Mat<Complex64>) -> Mat<Complex64> {
    let n = x.norm_l2();
    Mat::from_fn(x.nrows(), x.ncols(), |r, c| x[(r, c)] / n)
}

/// Extreme positive members ρ₀ + λρ₁ of the quasi-degenerate null space.
///
/// Requires the asymptotic decay rate to be below `null_tol`; `rho_lo` is the
/// endpoint with the smaller ⟨I_z⟩.
pub fn bistable_pair(l: &Liouvillian, null_tol: f64, pos_tol: f64) -> Result<BistablePair> {
    let opts = ExactOptions { null_tol: 1e-14, ..ExactOptions::default() };
    let an = analyze(l, &opts)?;
    let d = l.hilbert_dim;
    let rho0 = an.steady.rho.clone();
    let adr_pair = an
        .pairs
        .iter()
        .skip(1)
        .max_by(|a, b| a.lambda.re.total_cmp(&b.lambda.re))
        .ok_or_else(|| Error::Numerical("no decaying eigenvalue found".into()))?;
    let adr = adr_pair.lambda;
    if adr.norm() > null_tol {
        return Err(Error::Precondition(format!(
            "asymptotic decay rate |{adr}| exceeds null_tol {null_tol:e}; no quasi-degenerate null space"
        )));
    }

    let x = unvectorize(&adr_pair.vector, d);
    let re_part = Mat::from_fn(d, d, |r, c| 0.5 * (x[(r, c)] + x[(c, r)].conj()));
    let im_part = Mat::from_fn(d, d, |r, c| Complex64::new(0.0, -0.5) * (x[(r, c)] - x[(c, r)].conj()));
    let candidates: Vec<Mat<Complex64>> = if adr.im.abs() <= null_tol {
        vec![re_part]
    } else {
        (0..12)
            .map(|k| {
                let phi = std::f64::consts::PI * k as f64 / 12.0;
                combine(&Mat::from_fn(d, d, |r, c| phi.cos() * re_part[(r, c)]), &im_part, phi.sin())
            })
            .collect()
    };

    let mut best: Option<(f64, Mat<Complex64>, f64, f64)> = None;
    for cand in candidates {
        // remove any residual trace along ρ₀ so that Tr ρ₁ = 0
        let tr = trace(&cand);
        let traceless = Mat::from_fn(d, d, |r, c| cand[(r, c)] - tr * rho0.matrix[(r, c)]);
        let rho1 = normalized(traceless);
        let up = admissible_edge(&rho0.matrix, &rho1, 1.0, pos_tol);
        let down = admissible_edge(&rho0.matrix, &rho1, -1.0, pos_tol);
        let width = up + down;
        if best.as_ref().map_or(true, |b| width > b.0) {
            best = Some((width, rho1, -down, up));
        }
    }
    let (width, rho1, lmin, lmax) = best.expect("at least one candidate");
    if !(width > 0.0) {
        return Err(Error::Numerical("empty admissible interval".into()));
    }
    let a = DensityOperator { matrix: combine(&rho0.matrix, &rho1, lmin) };
    let b = DensityOperator { matrix: combine(&rho0.matrix, &rho1, lmax) };
    let (rho_lo, rho_up) = if observables(&a).spins.i_over_j[2] <= observables(&b).spins.i_over_j[2] {
        (a, b)
    } else {
        (b, a)
    };
    Ok(BistablePair { rho_lo, rho_up, rho0, rho1, lambda_range: (lmin, lmax), adr })
}
