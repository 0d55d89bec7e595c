//! Model parameters and the conventions shared by every solver.
//!
//! All energies are measured in units of the hyperfine coupling `a`. The
//! nuclear spin size is stored as `2J` so that dimensions like `2J+1` are
//! exact integer arithmetic.

use crate::error::{Error, Result};
use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Couplings of the central spin model plus the nuclear spin size.
///
/// `omega_drive` is the rescaled Rabi frequency Ω (the Hamiltonian carries
/// `JΩ`), `omega` the hyperfine detuning ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub a: f64,
    pub gamma: f64,
    pub omega_drive: f64,
    pub omega: f64,
    pub twice_j: u32,
}

/// Scales derived from [`ModelParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    pub omega_drive0: f64,
    pub omega0: f64,
    pub delta_omega: f64,
    pub epsilon: f64,
}

impl ModelParams {
    /// Validating constructor with energies given in units of `a`.
    pub fn new(a: f64, gamma: f64, omega_drive: f64, omega: f64, twice_j: u32) -> Result<Self> {
        let p = ModelParams { a, gamma, omega_drive, omega, twice_j };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `a = 1`, given as ratios to the critical scales:
    /// ω/ω₀ and Ω/Ω₀ (ω₀ = Ω₀ = 1/2).
    pub fn from_ratios(omega_ratio: f64, drive_ratio: f64, gamma: f64, twice_j: u32) -> Result<Self> {
        Self::new(1.0, gamma, 0.5 * drive_ratio, 0.5 * omega_ratio, twice_j)
    }

    /// Rescale all energies so that `a = 1`.
    pub fn normalized(&self) -> Self {
        ModelParams {
            a: 1.0,
            gamma: self.gamma / self.a,
            omega_drive: self.omega_drive / self.a,
            omega: self.omega / self.a,
            twice_j: self.twice_j,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::Domain(format!("a must be positive, got {}", self.a)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Domain(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !self.omega_drive.is_finite() || !self.omega.is_finite() {
            return Err(Error::Domain("drive and detuning must be finite".into()));
        }
        if self.twice_j < 1 {
            return Err(Error::Domain("J must be at least 1/2".into()));
        }
        Ok(())
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    /// Dimension of the nuclear spin space, 2J+1.
    pub fn nuclear_dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// Dimension of electron ⊗ nuclear space, 2(2J+1).
    pub fn hilbert_dim(&self) -> usize {
        2 * self.nuclear_dim()
    }

    pub fn omega_drive0(&self) -> f64 {
        self.a / 2.0
    }

    pub fn omega0(&self) -> f64 {
        self.a / 2.0
    }

    pub fn delta_omega(&self) -> f64 {
        self.omega - self.a / 2.0
    }

    pub fn omega_ratio(&self) -> f64 {
        self.omega / self.omega0()
    }

    pub fn drive_ratio(&self) -> f64 {
        self.omega_drive / self.omega_drive0()
    }

    pub fn with_drive(&self, omega_drive: f64) -> Self {
        ModelParams { omega_drive, ..*self }
    }

    pub fn with_twice_j(&self, twice_j: u32) -> Self {
        ModelParams { twice_j, ..*self }
    }
}

pub fn derived_scales(params: &ModelParams) -> Result<DerivedScales> {
    params.validate()?;
    Ok(DerivedScales {
        omega_drive0: params.omega_drive0(),
        omega0: params.omega0(),
        delta_omega: params.delta_omega(),
        epsilon: 1.0 / params.j().sqrt(),
    })
}

/// Electron and scaled nuclear first moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinExpectations {
    /// ⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩
    pub s: [f64; 3],
    /// ⟨I_x⟩/J, ⟨I_y⟩/J, ⟨I_z⟩/J
    pub i_over_j: [f64; 3],
}

impl SpinExpectations {
    pub fn is_physical(&self, tol: f64) -> bool {
        let s = Vector3::from(self.s).norm();
        let i = Vector3::from(self.i_over_j).norm();
        s <= 0.5 + tol && i <= 1.0 + tol
    }
}

/// Mean nuclear polarization (I_x, I_y, I_z)/J of the displacement √J β.
///
/// Uses ⟨I⁻⟩ = J√k β, i.e. I_x/J = √k Re β and I_y/J = −√k Im β, together
/// with I_z/J = |β|² − 1.
pub fn beta_to_polarization(beta: Complex64) -> Result<Vector3<f64>> {
    let b2 = beta.norm_sqr();
    if b2 > 2.0 + 1e-12 {
        return Err(Error::Domain(format!("|beta|^2 = {b2} exceeds 2")));
    }
    let sk = (2.0 - b2).max(0.0).sqrt();
    Ok(Vector3::new(sk * beta.re, -sk * beta.im, b2 - 1.0))
}
