//! Nuclear-only model after eliminating a strongly damped electron.
use centralspin::analytic::strong_dissipation_model;
use centralspin::exact::{build_liouvillian, partial_trace_electron, steady_state, trace_distance};
use centralspin::ModelParams;

fn main() -> centralspin::Result<()> {
    for (w, d) in [(1.0, 0.5), (1.5, 0.8), (0.5, 1.2)] {
        let p = ModelParams::from_ratios(w, d, 100.0, 20)?;
        let red = strong_dissipation_model(&p)?;
        let reduced = steady_state(&red.liouvillian, 1e-8)?;
        let full = steady_state(&build_liouvillian(&p)?, 1e-8)?;
        let dist = trace_distance(&partial_trace_electron(&full.rho.matrix), &reduced.rho.matrix);
        println!(
            "({w}, {d}): gamma_eff {:.2e}, Omega_eff {:.4}, trace distance {dist:.2e}",
            red.gamma_eff, red.omega_eff
        );
    }
    Ok(())
}
