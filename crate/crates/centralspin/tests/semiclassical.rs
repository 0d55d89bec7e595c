use approx::assert_abs_diff_eq;
use centralspin::semiclassical::{
    bloch_steady, find_roots, mean_field_residual, pair_partners, partner, residual, Branch,
};
use centralspin::{Error, ModelParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn p(w: f64, d: f64) -> ModelParams {
    ModelParams::from_ratios(w, d, 1.0, 2).unwrap()
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn bloch_steady_examples() {
    let e = bloch_steady(re(0.0), &p(1.0, 1.0)).unwrap();
    assert_abs_diff_eq!(e.s_z, -5.0 / 14.0, epsilon = 1e-14);
    assert_abs_diff_eq!(e.p_up, e.s_z + 0.5, epsilon = 1e-15);

    // dark state whenever the effective drive vanishes
    let q = p(1.0, 0.6);
    let e = bloch_steady(re(-(0.2f64.sqrt())), &q).unwrap();
    assert!(e.omega_tilde.norm() < 1e-12);
    assert_abs_diff_eq!(e.s_z, -0.5, epsilon = 1e-12);
    assert!(e.s_plus.norm() < 1e-12);

    let strong = ModelParams::from_ratios(1.0, 1.0, 1e6, 2).unwrap();
    assert_abs_diff_eq!(bloch_steady(re(-0.3), &strong).unwrap().s_z, -0.5, epsilon = 1e-9);
}

#[test]
fn residual_examples() {
    assert!(residual(re(0.0), &p(1.3, 0.0)).unwrap().norm() < 1e-15);
    for d in [0.1f64, 0.4, 0.6, 0.9, 1.0] {
        // √k β = −Ω/Ω₀ on the normal branch
        let x = d;
        let b2 = 1.0 - (1.0 - x * x).sqrt();
        let beta = re(-b2.sqrt());
        assert!(residual(beta, &p(1.0, d)).unwrap().norm() < 1e-12, "Omega = {d}");
    }
    let edge = Complex64::from_polar(2.0f64.sqrt(), 0.7);
    assert!(matches!(residual(edge, &p(1.0, 0.0)), Err(Error::Singular(_))));
    assert!(matches!(residual(re(1.6), &p(1.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn segment_x_roots() {
    let roots = find_roots(&p(1.0, 0.6), 40).unwrap();
    let has = |b: f64| roots.iter().any(|r| (r.beta - re(b)).norm() < 1e-6);
    assert!(has(-(0.2f64.sqrt())), "{roots:?}");
    assert!(has(-(1.8f64.sqrt())), "{roots:?}");
}

#[test]
fn undriven_roots_include_inverted_boundary() {
    let roots = find_roots(&p(1.5, 0.0), 40).unwrap();
    let zero = roots.iter().find(|r| r.beta.norm() < 1e-8).expect("polarized root");
    assert_eq!(zero.branch, Branch::Normal);
    let inv = roots.iter().find(|r| r.boundary).expect("inverted root");
    assert_eq!(inv.branch, Branch::Anomalous);
    assert_abs_diff_eq!(inv.nuclear0.z, 1.0, epsilon = 1e-10);
}

#[test]
fn normal_phase_has_single_pair() {
    let roots = find_roots(&p(1.5, 0.8), 40).unwrap();
    assert_eq!(roots.len(), 2, "{roots:?}");
    let partners = pair_partners(&roots);
    assert_eq!(partners, vec![Some(1), Some(0)]);
    assert!(roots[0].nuclear0.z < 0.0);
    assert_eq!(roots[0].branch, Branch::Normal);
    assert_eq!(roots[1].branch, Branch::Anomalous);
}

fn grid_points() -> Vec<(f64, f64)> {
    let mut v = vec![];
    for w in [0.25, 0.5, 1.0, 1.5, 2.0] {
        for d in [0.2, 0.8, 1.3, 2.2] {
            v.push((w, d));
        }
    }
    v
}

#[test]
fn roots_satisfy_invariants() {
    for (w, d) in grid_points() {
        let q = p(w, d);
        let roots = find_roots(&q, 30).unwrap();
        let partners = pair_partners(&roots);
        for (i, r) in roots.iter().enumerate() {
            assert!(r.residual <= 1e-10 * q.a, "({w}, {d}) residual {}", r.residual);
            assert_abs_diff_eq!(r.nuclear0.norm(), 1.0, epsilon = 1e-10);
            let mf = mean_field_residual(&r.electron, &r.nuclear0, &q);
            assert!(mf.iter().all(|x| x.abs() <= 1e-9), "({w}, {d}) {mf:?}");
            let j = partners[i].unwrap_or_else(|| panic!("({w}, {d}) root {i} has no partner"));
            let s = &roots[j];
            assert_abs_diff_eq!(s.electron.x.abs(), r.electron.x.abs(), epsilon = 1e-9);
            assert_abs_diff_eq!(s.electron.y, r.electron.y, epsilon = 1e-9);
            assert_abs_diff_eq!(s.electron.z, r.electron.z, epsilon = 1e-9);
            assert_abs_diff_eq!(s.nuclear0.x, r.nuclear0.x, epsilon = 1e-9);
            assert_abs_diff_eq!(s.nuclear0.y.abs(), r.nuclear0.y.abs(), epsilon = 1e-9);
            assert_abs_diff_eq!(s.nuclear0.z.abs(), r.nuclear0.z.abs(), epsilon = 1e-9);
        }
    }
}

proptest! {
    #[test]
    fn partner_flips_polarization(r in 0.01f64..1.41, phi in 0.0f64..std::f64::consts::TAU) {
        let b = Complex64::from_polar(r, phi);
        let q = partner(b);
        let v = centralspin::beta_to_polarization(b).unwrap();
        let u = centralspin::beta_to_polarization(q).unwrap();
        prop_assert!((u.x - v.x).abs() < 1e-12);
        prop_assert!((u.y + v.y).abs() < 1e-12);
        prop_assert!((u.z + v.z).abs() < 1e-12);
    }

    #[test]
    fn bloch_vector_stays_inside_sphere(r in 0.0f64..1.41, phi in 0.0f64..6.3, d in 0.0f64..3.0, g in 0.05f64..5.0) {
        let q = ModelParams::from_ratios(1.2, d, g, 2).unwrap();
        let e = bloch_steady(Complex64::from_polar(r, phi), &q).unwrap();
        prop_assert!(e.vector().norm() <= 0.5 + 1e-12);
        prop_assert!(e.s_z <= 0.0);
    }
}
