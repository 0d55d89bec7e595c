//! Closed-form solution on the resonant line omega = omega0, Omega <= Omega0.
use centralspin::analytic::{gamma_eff_asymptotic, segment_x};
use centralspin::ModelParams;

fn main() -> centralspin::Result<()> {
    println!("Omega/Omega0  beta_-    beta_+    Gamma_eff  Theta_eff  xi_y^2");
    for d in [0.0, 0.2, 0.4, 0.6, 0.8, 0.95, 0.999] {
        let s = segment_x(&ModelParams::from_ratios(1.0, d, 1.0, 2)?)?;
        println!(
            "{d:<12}  {:+.5}  {:+.5}  {:.5}    {:+.5}   {:.5}",
            s.beta_minus, s.beta_plus, s.gamma_eff, s.theta_eff, s.xi_y2
        );
    }
    let p = ModelParams::from_ratios(1.0, 0.999, 1.0, 2)?;
    println!("near-critical Gamma_eff asymptote {:.5}", gamma_eff_asymptotic(&p)?);
    match segment_x(&ModelParams::from_ratios(1.0, 1.2, 1.0, 2)?) {
        Err(e) => println!("Omega > Omega0: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
