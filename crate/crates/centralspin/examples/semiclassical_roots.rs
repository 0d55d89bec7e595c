//! Self-consistent displacements and their Gaussian stability.
use centralspin::gaussian::analyze_root;
use centralspin::semiclassical::{find_roots, pair_partners};
use centralspin::ModelParams;

fn main() -> centralspin::Result<()> {
    for (w, d) in [(1.5, 0.5), (1.5, 1.3), (0.5, 1.5)] {
        let p = ModelParams::from_ratios(w, d, 1.0, 2)?;
        let roots = find_roots(&p, 40)?;
        let partners = pair_partners(&roots);
        println!("omega/omega0 = {w}, Omega/Omega0 = {d}: {} roots", roots.len());
        for (i, r) in roots.iter().enumerate() {
            let stable = if r.boundary { None } else { Some(analyze_root(r.beta, &p, None)?.drift.stable()) };
            println!(
                "  beta = {:.4}  {:?}  I_z/J = {:+.4}  stable {:?}  partner {:?}",
                r.beta, r.branch, r.nuclear0.z, stable, partners[i]
            );
        }
    }
    Ok(())
}
