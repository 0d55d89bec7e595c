use approx::assert_abs_diff_eq;
use centralspin::{beta_to_polarization, derived_scales, Error, ModelParams, SpinExpectations};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn resonant_detuning_vanishes() {
    let p = ModelParams::new(1.0, 1.0, 0.2, 0.5, 10).unwrap();
    let s = derived_scales(&p).unwrap();
    assert_eq!(s.delta_omega, 0.0);
    assert_eq!(s.omega_drive0, 0.5);
    assert_eq!(s.omega0, 0.5);
}

#[test]
fn scales_follow_coupling() {
    let p = ModelParams::new(2.0, 1.0, 0.0, 3.0, 4).unwrap();
    let s = derived_scales(&p).unwrap();
    assert_eq!(s.omega_drive0, 1.0);
    assert_eq!(s.delta_omega, 2.0);
}

#[test]
fn epsilon_is_inverse_root_j() {
    let p = ModelParams::from_ratios(1.0, 1.0, 1.0, 200).unwrap();
    assert_abs_diff_eq!(derived_scales(&p).unwrap().epsilon, 0.1, epsilon = 1e-15);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(matches!(ModelParams::new(0.0, 1.0, 0.0, 0.0, 2), Err(Error::Domain(_))));
    assert!(matches!(ModelParams::new(1.0, -1.0, 0.0, 0.0, 2), Err(Error::Domain(_))));
    assert!(matches!(ModelParams::new(1.0, 1.0, 0.0, 0.0, 0), Err(Error::Domain(_))));
    assert!(matches!(ModelParams::new(1.0, 1.0, f64::NAN, 0.0, 2), Err(Error::Domain(_))));
}

#[test]
fn normalization_rescales_energies() {
    let p = ModelParams::new(2.0, 4.0, 1.0, 3.0, 6).unwrap().normalized();
    assert_eq!((p.a, p.gamma, p.omega_drive, p.omega), (1.0, 2.0, 0.5, 1.5));
    assert_eq!(p.omega_ratio(), 3.0);
    assert_eq!(p.drive_ratio(), 1.0);
}

#[test]
fn polarization_examples() {
    let v = beta_to_polarization(Complex64::new(0.0, 0.0)).unwrap();
    assert_eq!([v.x, v.y, v.z], [0.0, 0.0, -1.0]);
    let v = beta_to_polarization(Complex64::new(-1.0, 0.0)).unwrap();
    assert_abs_diff_eq!(v.x, -1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(v.z, 0.0, epsilon = 1e-15);
    let v = beta_to_polarization(Complex64::new(-(0.2f64.sqrt()), 0.0)).unwrap();
    assert_abs_diff_eq!(v.x, -0.6, epsilon = 1e-14);
    assert_abs_diff_eq!(v.y, 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(v.z, -0.8, epsilon = 1e-14);
}

#[test]
fn polarization_outside_disc_is_an_error() {
    assert!(matches!(beta_to_polarization(Complex64::new(1.5, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn physicality_check() {
    let ok = SpinExpectations { s: [0.0, 0.0, -0.5], i_over_j: [0.6, 0.0, -0.8] };
    assert!(ok.is_physical(1e-12));
    let bad = SpinExpectations { s: [0.5, 0.0, -0.5], i_over_j: [0.0, 0.0, -1.0] };
    assert!(!bad.is_physical(1e-12));
}

proptest! {
    #[test]
    fn polarization_has_unit_length(r in 0.0f64..2.0f64.sqrt(), phi in 0.0f64..std::f64::consts::TAU) {
        let beta = Complex64::from_polar(r, phi);
        let v = beta_to_polarization(beta).unwrap();
        prop_assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn derived_scales_are_pure(a in 0.1f64..10.0, w in -5.0f64..5.0, tj in 1u32..400) {
        let p = ModelParams::new(a, 1.0, 0.3, w, tj).unwrap();
        let s1 = derived_scales(&p).unwrap();
        let s2 = derived_scales(&p).unwrap();
        prop_assert_eq!(s1, s2);
        prop_assert_eq!(s1.delta_omega, w - a / 2.0);
        prop_assert_eq!(s1.omega0, s1.omega_drive0);
    }
}
