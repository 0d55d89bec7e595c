//! Brute-force electron oracle shared by the integration tests.
#![allow(dead_code)]

use centralspin::gaussian::{coefficients, coupling_vectors, electron_operators};
use centralspin::ModelParams;
use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

type M2 = Matrix2<Complex64>;

/// Electron-only Lindbladian in the field of a frozen displacement.
pub struct Electron {
    h: M2,
    lower: M2,
    gamma: f64,
}

impl Electron {
    pub fn new(beta: Complex64, q: &ModelParams) -> Self {
        let [sp, sm, sz] = electron_operators();
        let k = 2.0 - beta.norm_sqr();
        let ot = q.omega_drive + 0.5 * q.a * k.sqrt() * beta;
        let jz0 = beta.norm_sqr() - 1.0;
        let h = sp * ot + sm * ot.conj() + sz * re(q.a * jz0);
        Electron { h, lower: sm, gamma: q.gamma }
    }

    fn apply(&self, r: &M2) -> M2 {
        let i = Complex64::i();
        let l = &self.lower;
        let ld = l.adjoint();
        (self.h * r - r * self.h) * (-i) + (l * r * ld - (ld * l * r + r * ld * l) * re(0.5)) * re(self.gamma)
    }

    fn rk4(&self, r: &M2, dt: f64) -> M2 {
        let k1 = self.apply(r);
        let k2 = self.apply(&(r + k1 * re(dt / 2.0)));
        let k3 = self.apply(&(r + k2 * re(dt / 2.0)));
        let k4 = self.apply(&(r + k3 * re(dt)));
        r + (k1 + k2 * re(2.0) + k3 * re(2.0) + k4) * re(dt / 6.0)
    }

    fn dt(&self) -> f64 {
        0.01 / (self.gamma + self.h.norm())
    }

    pub fn steady(&self) -> M2 {
        let mut r = M2::new(re(1.0), re(0.0), re(0.0), re(0.0));
        let dt = self.dt();
        let steps = (400.0 / self.gamma / dt) as usize;
        for _ in 0..steps {
            r = self.rk4(&r, dt);
        }
        r
    }

    /// ∫₀^T (Tr[X e^{ℒt}(Y ρ)] − ⟨X⟩⟨Y⟩) dt, or with ρY when `right`.
    pub fn correlate(&self, rho: &M2, x: &M2, y: &M2, right: bool) -> Complex64 {
        let ex = (rho * x).trace();
        let ey = (rho * y).trace();
        let mut r = if right { rho * y } else { y * rho };
        let t_end = 50.0 / self.gamma;
        let dt = self.dt();
        let steps = (t_end / dt).ceil() as usize;
        let f = |r: &M2| (x * r).trace() - ex * ey;
        // Simpson's rule on the RK4 trajectory
        let mut acc = f(&r);
        for n in 1..=steps {
            r = self.rk4(&r, dt);
            let w = if n == steps { 1.0 } else if n % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(&r) * w;
        }
        acc * (dt / 3.0)
    }
}

pub fn combo(coef: &Vector3<Complex64>) -> M2 {
    let ops = electron_operators();
    (0..3).fold(M2::zeros(), |acc, i| acc + ops[i] * coef[i].conj())
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-3)
}

/// Largest relative deviation of the effective coefficients from
/// quantum-regression integrals of the brute-force electron dynamics.
pub fn coefficient_deviation(beta: Complex64, q: &ModelParams) -> f64 {
    let co = coefficients(beta, q).unwrap();
    let el = Electron::new(beta, q);
    let rho = el.steady();
    let (v, w) = coupling_vectors(beta, q);
    let (wc, vc) = (combo(&w), combo(&v));
    let adag_a = el.correlate(&rho, &wc, &wc.adjoint(), false);
    let a_adag = el.correlate(&rho, &vc, &vc.adjoint(), false);
    let aa_t = el.correlate(&rho, &vc, &wc.adjoint(), false);
    let aa_0t = el.correlate(&rho, &wc.adjoint(), &vc, true);
    let c = aa_t + aa_0t;
    let alpha = (aa_t - aa_0t) / Complex64::new(0.0, 2.0);
    [
        rel(Complex64::new(co.r_a, co.i_a), adag_a),
        rel(Complex64::new(co.r_b, co.i_b), a_adag),
        rel(co.c, c),
        rel(co.alpha, alpha),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}
