//! Low-lying Liouvillian spectrum and the asymptotic decay rate.
use centralspin::exact::{build_liouvillian, low_spectrum};
use centralspin::ModelParams;

fn main() -> centralspin::Result<()> {
    for twice_j in [20, 40, 80] {
        let p = ModelParams::from_ratios(1.0, 1.0, 1.0, twice_j)?;
        let s = low_spectrum(&build_liouvillian(&p)?, 6)?;
        println!("J = {:>4}: ADR = {:.5}", p.j(), s.adr);
        for z in &s.eigenvalues {
            println!("    {z:.5}");
        }
    }
    Ok(())
}
