use centralspin::exact::{build_liouvillian, expect, observables, steady_state, unvectorize, vectorize};
use centralspin::operators::ModelOperators;
use centralspin::shells::{build_shell_liouvillian, build_shell_liouvillian_with_budget, shell_eigenstate, Shell, ShellConfig};
use centralspin::{Error, ModelParams};
use faer::Mat;
use num_complex::Complex64;

fn params(w: f64, d: f64) -> ModelParams {
    ModelParams::from_ratios(w, d, 1.0, 2).unwrap()
}

fn shells(spec: &[(f64, u32)], p: ModelParams) -> ShellConfig {
    ShellConfig::new(spec.iter().map(|&(weight, twice_j)| Shell { weight, twice_j }).collect(), p).unwrap()
}

#[test]
fn configuration_is_validated() {
    let p = params(1.0, 0.5);
    assert!(ShellConfig::new(vec![], p).is_err());
    assert!(ShellConfig::new(vec![Shell { weight: 0.0, twice_j: 2 }], p).is_err());
    assert!(ShellConfig::new(vec![Shell { weight: 1.0, twice_j: 0 }], p).is_err());
    let c = shells(&[(2.0, 16), (1.0, 16)], p);
    assert_eq!(c.total_j(), 16.0);
    assert_eq!(c.nuclear_dim(), 289);
}

#[test]
fn single_shell_reproduces_homogeneous_model() {
    for (w, d, tj) in [(1.0, 0.5, 10u32), (1.5, 1.3, 7), (0.5, 0.8, 12)] {
        let p = ModelParams::from_ratios(w, d, 1.0, tj).unwrap();
        let c = shells(&[(1.0, tj)], p);
        let ls = build_shell_liouvillian(&c).unwrap();
        let lh = build_liouvillian(&p).unwrap();
        assert_eq!(ls.hilbert_dim, lh.hilbert_dim);
        let diff = ls.matrix.add(&lh.matrix.scale(Complex64::new(-1.0, 0.0)));
        assert!(diff.norm_fro() <= 1e-12 * lh.matrix.norm_fro());
        let a = observables(&steady_state(&ls, 1e-8).unwrap().rho);
        let b = observables(&steady_state(&lh, 1e-8).unwrap().rho);
        for k in 0..3 {
            assert!((a.spins.s[k] - b.spins.s[k]).abs() <= 1e-12);
            assert!((a.spins.i_over_j[k] - b.spins.i_over_j[k]).abs() <= 1e-12);
        }
    }
}

#[test]
fn shell_liouvillian_preserves_trace_and_hermiticity() {
    let c = shells(&[(1.4, 1), (0.67, 2), (1.0, 3)], params(1.2, 0.7));
    let l = build_shell_liouvillian(&c).unwrap();
    assert!(l.trace_defect() <= 1e-12);
    let d = l.hilbert_dim;
    let x = Mat::from_fn(d, d, |r, c| Complex64::new((r * 7 + c * 3) as f64 % 5.0 - 2.0, (r + 2 * c) as f64 % 3.0 - 1.0));
    let lx = unvectorize(&l.matrix.matvec(&vectorize(&x)), d);
    let lxd = unvectorize(&l.matrix.matvec(&vectorize(&x.adjoint().to_owned())), d);
    assert!((&lxd - lx.adjoint()).norm_l2() <= 1e-10 * x.norm_l2());
    let ss = steady_state(&l, 1e-8).unwrap();
    assert!(ss.rho.min_eigenvalue() >= -1e-8);
}

#[test]
fn memory_budget_is_enforced() {
    let c = shells(&[(2.0, 16), (1.0, 16)], params(1.0, 0.5));
    assert!(matches!(build_shell_liouvillian_with_budget(&c, 1000), Err(Error::Resource { .. })));
}

/// Two shells with g₁ = 2g₂ on the resonant line: the electron stays dark
/// and ⟨A_x⟩ follows the drive linearly until the inhomogeneous threshold.
#[test]
fn two_shell_drive_sweep() {
    let spec = [(4.0 / 3.0, 6u32), (2.0 / 3.0, 6)];
    let mut sz = vec![];
    for d in [0.3, 0.5, 1.6] {
        let c = shells(&spec, params(1.0, d));
        let ss = steady_state(&build_shell_liouvillian(&c).unwrap(), 1e-8).unwrap();
        let (am, az) = c.nuclear_operators();
        let ops = ModelOperators::from_nuclear(&am, &az);
        sz.push(expect(&ss.rho.matrix, &ops.p_up).re - 0.5);
        let ax = expect(&ss.rho.matrix, &ops.i_minus).re / c.total_j();
        if d < 1.0 {
            assert!((ax + d).abs() < 1e-3, "Omega {d}: A_x/J = {ax}");
        }
    }
    assert!((sz[0] + 0.5).abs() < 1e-6 && (sz[1] + 0.5).abs() < 1e-4, "{sz:?}");
    assert!(sz[2] > -0.3, "{sz:?}");
}

#[test]
fn large_two_shell_systems_exceed_default_budget() {
    let c = shells(&[(4.0 / 3.0, 16), (2.0 / 3.0, 16)], params(1.0, 0.5));
    assert!(matches!(build_shell_liouvillian(&c), Err(Error::Resource { .. })));
}

#[test]
fn five_spin_halves_pump_to_polarized_state() {
    let g = [0.67, 0.79, 0.94, 1.15, 1.4];
    let spec: Vec<(f64, u32)> = g.iter().map(|&w| (w, 1)).collect();
    let c = shells(&spec, params(1.5, 0.0));
    assert_eq!(c.nuclear_dim(), 32);
    let ss = steady_state(&build_shell_liouvillian(&c).unwrap(), 1e-8).unwrap();
    assert!((ss.rho.matrix[(0, 0)].re - 1.0).abs() < 1e-8);
    let c = shells(&spec, params(1.5, 1.5));
    let ss = steady_state(&build_shell_liouvillian(&c).unwrap(), 1e-8).unwrap();
    assert!(ss.rho.min_eigenvalue() >= -1e-8);
    assert!(ss.rho.purity() < 1.0 - 1e-3);
}

#[test]
fn polarized_product_is_exact_eigenstate() {
    let c = shells(&[(2.0, 16), (1.0, 16)], params(1.0, 0.5));
    let e = shell_eigenstate(&c, &[0.0, 0.0]).unwrap();
    assert_eq!(e.residual, 0.0);
    assert_eq!(e.eigenvalue, 0.0);
    assert!(matches!(shell_eigenstate(&c, &[0.0]), Err(Error::Domain(_))));
}

#[test]
fn shell_eigenstate_residual_shrinks_with_size() {
    let mut rel = vec![];
    for tj in [16u32, 32, 64] {
        let c = shells(&[(2.0, tj), (1.0, tj)], params(1.0, 0.5));
        let e = shell_eigenstate(&c, &[-0.3, -0.5]).unwrap();
        assert!(e.truncation_loss <= 2e-6);
        rel.push(e.residual / e.eigenvalue.abs());
    }
    assert!(rel[0] > rel[1] && rel[1] > rel[2], "{rel:?}");
}

#[test]
fn equal_weighted_displacements_are_degenerate() {
    let c = shells(&[(1.0, 40), (1.0, 40)], params(1.0, 0.5));
    let e1 = shell_eigenstate(&c, &[-0.3, -0.5]).unwrap();
    let e2 = shell_eigenstate(&c, &[-0.5, -0.3]).unwrap();
    assert!((e1.eigenvalue - e2.eigenvalue).abs() < 1e-12);
    let overlap: Complex64 = e1.vector.iter().zip(&e2.vector).map(|(a, b)| a.conj() * b).sum();
    assert!(overlap.norm() < 0.5);
}
