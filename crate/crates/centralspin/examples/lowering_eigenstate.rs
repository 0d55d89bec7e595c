//! Displaced squeezed state that is an approximate eigenstate of I^-.
use centralspin::analytic::{lowering_eigenstate, lowering_residual};
use num_complex::Complex64;

fn main() -> centralspin::Result<()> {
    let beta = -0.5;
    for twice_j in [50, 100, 200, 400] {
        let s = lowering_eigenstate(twice_j, beta)?;
        let r = lowering_residual(twice_j, &s.vector, Complex64::new(s.eigenvalue, 0.0));
        println!(
            "J = {:>5}: eigenvalue {:+.4}, residual {:.4} (relative {:.2e}), truncation loss {:.1e}",
            twice_j as f64 / 2.0,
            s.eigenvalue,
            r,
            r / s.eigenvalue.abs(),
            s.truncation_loss
        );
    }
    Ok(())
}
