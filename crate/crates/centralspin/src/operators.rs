//! Spin operators, the central spin Hamiltonian and the generic Lindblad
//! superoperator construction.
//!
//! Composite states use the interleaved ordering `2·n + s`, where `n = m + J`
//! labels the nuclear state |J, m⟩ and `s ∈ {0 = ↓, 1 = ↑}` the electron. In
//! this ordering the central spin Hamiltonian is tridiagonal.

use crate::params::ModelParams;
use crate::sparse::CsrMatrix;
use num_complex::Complex64;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Collective spin operators in the |J, m⟩ basis, m = −J..J.
#[derive(Debug, Clone)]
pub struct SpinOps {
    pub twice_j: u32,
    pub lower: CsrMatrix,
    pub raise: CsrMatrix,
    pub z: CsrMatrix,
}

impl SpinOps {
    pub fn new(twice_j: u32) -> Self {
        let n = twice_j as usize + 1;
        let j = twice_j as f64 / 2.0;
        let mut lo = vec![];
        let mut zz = vec![];
        for k in 0..n {
            let m = k as f64 - j;
            zz.push((k, k, re(m)));
            if k > 0 {
                // I⁻|m⟩ = √(J(J+1) − m(m−1)) |m−1⟩
                lo.push((k - 1, k, re((j * (j + 1.0) - m * (m - 1.0)).sqrt())));
            }
        }
        let lower = CsrMatrix::from_triplets(n, n, lo);
        let raise = lower.adjoint();
        SpinOps { twice_j, lower, raise, z: CsrMatrix::from_triplets(n, n, zz) }
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn x(&self) -> CsrMatrix {
        self.raise.add(&self.lower).scale(re(0.5))
    }

    pub fn y(&self) -> CsrMatrix {
        self.raise.add(&self.lower.scale(re(-1.0))).scale(Complex64::new(0.0, -0.5))
    }
}

/// Electron operators on {↓, ↑}.
pub fn electron_lower() -> CsrMatrix {
    CsrMatrix::from_triplets(2, 2, vec![(0, 1, re(1.0))])
}

pub fn electron_raise() -> CsrMatrix {
    CsrMatrix::from_triplets(2, 2, vec![(1, 0, re(1.0))])
}

pub fn electron_up_projector() -> CsrMatrix {
    CsrMatrix::from_triplets(2, 2, vec![(1, 1, re(1.0))])
}

/// Operators of the electron ⊗ nuclear model embedded in the interleaved basis.
#[derive(Debug, Clone)]
pub struct ModelOperators {
    pub dim: usize,
    pub s_minus: CsrMatrix,
    pub s_plus: CsrMatrix,
    pub p_up: CsrMatrix,
    pub i_minus: CsrMatrix,
    pub i_plus: CsrMatrix,
    pub i_z: CsrMatrix,
}

impl ModelOperators {
    /// Embed an arbitrary nuclear ladder/z triple (collective or shell-weighted).
    pub fn from_nuclear(i_minus: &CsrMatrix, i_z: &CsrMatrix) -> Self {
        let n = i_minus.nrows;
        let id_n = CsrMatrix::identity(n);
        let id_e = CsrMatrix::identity(2);
        let im = i_minus.kron(&id_e);
        ModelOperators {
            dim: 2 * n,
            s_minus: id_n.kron(&electron_lower()),
            s_plus: id_n.kron(&electron_raise()),
            p_up: id_n.kron(&electron_up_projector()),
            i_plus: im.adjoint(),
            i_minus: im,
            i_z: i_z.kron(&id_e),
        }
    }

    pub fn new(twice_j: u32) -> Self {
        let s = SpinOps::new(twice_j);
        Self::from_nuclear(&s.lower, &s.z)
    }

    /// H = JΩ(S⁺+S⁻) + δω I_z + (a/2)(S⁺I⁻ + S⁻I⁺) + a S⁺S⁻ I_z.
    ///
    /// `jomega` is the physical drive amplitude JΩ; for the homogeneous model
    /// use [`hamiltonian`].
    pub fn hamiltonian_with(&self, a: f64, jomega: f64, delta_omega: f64) -> CsrMatrix {
        let drive = self.s_plus.add(&self.s_minus).scale(re(jomega));
        let zeeman = self.i_z.scale(re(delta_omega));
        let flip = self
            .s_plus
            .matmul(&self.i_minus)
            .add(&self.s_minus.matmul(&self.i_plus))
            .scale(re(a / 2.0));
        let knight = self.p_up.matmul(&self.i_z).scale(re(a));
        drive.add(&zeeman).add(&flip).add(&knight)
    }
}

pub fn hamiltonian(params: &ModelParams) -> CsrMatrix {
    let ops = ModelOperators::new(params.twice_j);
    ops.hamiltonian_with(params.a, params.j() * params.omega_drive, params.delta_omega())
}

/// Row-stacked vectorization of `X ↦ −i[H, X] + Σ_k r_k D[L_k]X`.
///
/// With vec(AXB) = (A ⊗ Bᵀ) vec X the generator reads
/// `K ⊗ 1 + 1 ⊗ K̄ + Σ r L ⊗ L̄` where `K = −iH − ½ Σ r L†L`.
pub fn lindblad_superoperator(h: &CsrMatrix, jumps: &[(f64, CsrMatrix)]) -> CsrMatrix {
    let d = h.nrows;
    let mut k = h.scale(Complex64::new(0.0, -1.0));
    for (rate, l) in jumps {
        k = k.add(&l.adjoint().matmul(l).scale(re(-0.5 * rate)));
    }
    let kc = k.conj();
    let mut t: Vec<(usize, usize, Complex64)> = Vec::with_capacity(2 * k.nnz() * d);
    for (r, s, v) in k.triplets() {
        for c in 0..d {
            t.push((r * d + c, s * d + c, v));
        }
    }
    for (c, s, v) in kc.triplets() {
        for r in 0..d {
            t.push((r * d + c, r * d + s, v));
        }
    }
    for (rate, l) in jumps {
        let lc = l.conj();
        for (r1, c1, v1) in l.triplets() {
            for (r2, c2, v2) in lc.triplets() {
                t.push((r1 * d + r2, c1 * d + c2, v1 * v2 * rate));
            }
        }
    }
    CsrMatrix::from_triplets(d * d, d * d, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_commutator() {
        for tj in 1..6 {
            let s = SpinOps::new(tj);
            // [I⁺, I⁻] = 2 I_z
            let c = s.raise.matmul(&s.lower).add(&s.lower.matmul(&s.raise).scale(re(-1.0)));
            let diff = c.add(&s.z.scale(re(-2.0)));
            assert!(diff.norm_fro() < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_is_hermitian_and_tridiagonal() {
        let p = ModelParams::from_ratios(1.3, 0.7, 1.0, 7).unwrap();
        let h = hamiltonian(&p);
        assert!(h.hermiticity_error() < 1e-12);
        for (r, c, _) in h.triplets() {
            assert!(r.abs_diff(c) <= 1);
        }
    }
}
