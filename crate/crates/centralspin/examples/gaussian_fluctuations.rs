//! Fluctuation coefficients, drift, covariance and witness at a normal root.
use centralspin::gaussian::analyze_root;
use centralspin::semiclassical::find_roots;
use centralspin::ModelParams;

fn main() -> centralspin::Result<()> {
    let p = ModelParams::from_ratios(1.5, 0.8, 1.0, 2)?;
    let beta = find_roots(&p, 40)?[0].beta;
    let rep = analyze_root(beta, &p, Some(150.0))?;
    let c = &rep.coefficients;
    println!("beta = {beta:.5}");
    println!("R_a = {:.5}, R_b = {:.5}, chi = {:.5}, xi = {:.5}", c.r_a, c.r_b, c.chi, c.xi);
    println!("drift eigenvalues {:.5} {:.5}, overdamped {}", rep.drift.eigenvalues[0], rep.drift.eigenvalues[1], rep.drift.overdamped);
    if let (Some(cov), Some(w)) = (rep.covariance, rep.witness) {
        println!("n = {:.5}, m = {:.5}, D = {:.5}, T_eff = {:.4}", cov.n, cov.m, cov.d_purity, cov.t_eff);
        println!("squeezing M = {:.4}, witness C = {:.4}, xi_y^2 = {:.4}", cov.m_squeeze, w.c, w.xi_y2);
    }
    println!("expansion valid at J = 150: {}", rep.expansion_valid);
    Ok(())
}
