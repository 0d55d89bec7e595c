//! Polarization time of a mixed bath with and without drive.
use centralspin::scan::{spin_pumping_rate_probe, InitialState, ProbeMethod};
use centralspin::ModelParams;

fn main() -> centralspin::Result<()> {
    let p = ModelParams::from_ratios(0.5, 1.0, 0.1, 20)?;
    for method in [ProbeMethod::Spectral, ProbeMethod::Propagation] {
        let r = spin_pumping_rate_probe(&p, InitialState::Mixed, method)?;
        println!(
            "{method:?}: driven {:.1}, undriven {:.1}, speedup {:.2} (ADR ratio {:.2})",
            r.time,
            r.baseline_time,
            r.speedup,
            r.adr.re / r.baseline_adr.re
        );
    }
    Ok(())
}
