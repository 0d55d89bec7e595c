//! Two shells with couplings in ratio 2:1 driven along the resonant line.
use centralspin::exact::{expect, steady_state};
use centralspin::operators::ModelOperators;
use centralspin::shells::{build_shell_liouvillian, Shell, ShellConfig};
use centralspin::ModelParams;

fn main() -> centralspin::Result<()> {
    let shells = vec![Shell { weight: 4.0 / 3.0, twice_j: 6 }, Shell { weight: 2.0 / 3.0, twice_j: 6 }];
    for d in [0.3, 0.5, 0.7, 1.1, 1.6] {
        let cfg = ShellConfig::new(shells.clone(), ModelParams::from_ratios(1.0, d, 1.0, 2)?)?;
        let l = build_shell_liouvillian(&cfg)?;
        let ss = steady_state(&l, 1e-8)?;
        let (am, az) = cfg.nuclear_operators();
        let ops = ModelOperators::from_nuclear(&am, &az);
        let sz = expect(&ss.rho.matrix, &ops.p_up).re - 0.5;
        let ax = expect(&ss.rho.matrix, &ops.i_minus).re / cfg.total_j();
        println!("Omega/Omega0 = {d}: S_z = {sz:+.5}, A_x/J = {ax:+.4}");
    }
    Ok(())
}
