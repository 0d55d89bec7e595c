//! Exact steady state of a J = 20 bath and its spin moments.
use centralspin::exact::{build_liouvillian, observables, steady_state};
use centralspin::ModelParams;

fn main() -> centralspin::Result<()> {
    let p = ModelParams::from_ratios(1.5, 0.5, 1.0, 40)?;
    let l = build_liouvillian(&p)?;
    println!("superoperator dimension {}, trace defect {:.1e}", l.dim(), l.trace_defect());
    let ss = steady_state(&l, 1e-8)?;
    let o = observables(&ss.rho);
    println!("residual {:.1e}, purity {:.4}", ss.residual, ss.rho.purity());
    println!("<S>   = {:?}", o.spins.s);
    println!("<I>/J = {:?}", o.spins.i_over_j);
    println!("witness C = {:.4}", o.witness());
    Ok(())
}
