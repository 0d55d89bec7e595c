use super::DensityOperator;
use crate::operators::{ModelOperators, SpinOps};
use crate::params::SpinExpectations;
use crate::sparse::CsrMatrix;
use faer::Mat;
use num_complex::Complex64;

/// Tr(ρ A) for dense ρ and sparse A.
pub fn expect(rho: &Mat<Complex64>, op: &CsrMatrix) -> Complex64 {
    op.triplets().map(|(r, c, v)| v * rho[(c, r)]).sum()
}

/// Nuclear reduced state Tr_S ρ for the interleaved layout.
pub fn partial_trace_electron(rho: &Mat<Complex64>) -> Mat<Complex64> {
    let n = rho.nrows() / 2;
    Mat::from_fn(n, n, |i, j| rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)])
}

/// First and second moments of a steady state of the homogeneous model.
#[derive(Debug, Clone)]
pub struct Observables {
    pub spins: SpinExpectations,
    pub j: f64,
    /// ⟨S_i I_j⟩ − ⟨S_i⟩⟨I_j⟩ (I unscaled), i, j ∈ {x, y, z}.
    pub connected: [[f64; 3]; 3],
    /// Symmetrized ⟨ΔI_i ΔI_j⟩ (unscaled).
    pub nuclear_cov: [[f64; 3]; 3],
    /// p(m) for m = −J..J.
    pub populations: Vec<f64>,
    pub purity: f64,
}

impl Observables {
    /// 2⟨ΔI_y²⟩/|⟨I⟩|
    pub fn squeezing_y(&self) -> f64 {
        let len = self.j * nalgebra::Vector3::from(self.spins.i_over_j).norm();
        2.0 * self.nuclear_cov[1][1] / len
    }

    /// C = max(0, 1 − λ_min(Q)), Q = (2/J) Cov(I) + ⟨I⟩⟨I⟩ᵀ/J².
    pub fn witness(&self) -> f64 {
        let m = nalgebra::Vector3::from(self.spins.i_over_j);
        let cov = nalgebra::Matrix3::from_fn(|a, b| self.nuclear_cov[a][b]);
        let q = cov * (2.0 / self.j) + m * m.transpose();
        (1.0 - q.symmetric_eigenvalues().min()).max(0.0)
    }
}

pub fn observables(rho: &DensityOperator) -> Observables {
    let m = &rho.matrix;
    let d = m.nrows();
    let n = d / 2;
    let twice_j = (n - 1) as u32;
    let j = twice_j as f64 / 2.0;

    let mut sp = Complex64::new(0.0, 0.0);
    let mut sz = 0.0;
    for k in 0..n {
        sp += m[(2 * k, 2 * k + 1)];
        sz += 0.5 * (m[(2 * k + 1, 2 * k + 1)].re - m[(2 * k, 2 * k)].re);
    }
    let s = [sp.re, sp.im, sz];

    let sigma = partial_trace_electron(m);
    let nuc = SpinOps::new(twice_j);
    let iops = [nuc.x(), nuc.y(), nuc.z.clone()];
    let imean: Vec<f64> = iops.iter().map(|o| expect(&sigma, o).re).collect();
    let mut nuclear_cov = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let ab = expect(&sigma, &iops[a].matmul(&iops[b]));
            let ba = expect(&sigma, &iops[b].matmul(&iops[a]));
            nuclear_cov[a][b] = 0.5 * (ab + ba).re - imean[a] * imean[b];
        }
    }

    let ops = ModelOperators::new(twice_j);
    let half = Complex64::new(0.5, 0.0);
    let sx = ops.s_plus.add(&ops.s_minus).scale(half);
    let sy = ops.s_plus.add(&ops.s_minus.scale(Complex64::new(-1.0, 0.0))).scale(Complex64::new(0.0, -0.5));
    let szo = ops.p_up.add(&CsrMatrix::identity(d).scale(Complex64::new(-0.5, 0.0)));
    let ix = ops.i_plus.add(&ops.i_minus).scale(half);
    let iy = ops.i_plus.add(&ops.i_minus.scale(Complex64::new(-1.0, 0.0))).scale(Complex64::new(0.0, -0.5));
    let full_s = [sx, sy, szo];
    let full_i = [ix, iy, ops.i_z.clone()];
    let mut connected = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            // S and I commute, so the product is Hermitian
            connected[a][b] = expect(m, &full_s[a].matmul(&full_i[b])).re - s[a] * imean[b];
        }
    }

    let populations = (0..n).map(|k| sigma[(k, k)].re).collect();
    Observables {
        spins: SpinExpectations { s, i_over_j: [imean[0] / j, imean[1] / j, imean[2] / j] },
        j,
        connected,
        nuclear_cov,
        populations,
        purity: rho.purity(),
    }
}
