//! Closed-form Heisenberg propagator against a matrix exponential of the
//! generator, with the rescaled commutator check on both.

use spinwave_entangler::model::ModelConfig;
use spinwave_entangler::propagator::{analytic_transform, inf_norm, numeric_transform};

fn main() -> spinwave_entangler::Result<()> {
    let cases: [(f64, &[f64], f64); 4] = [
        (0.05, &[1.0], 1.0),
        (0.3, &[1.0, 0.4], 2.0),
        (0.0, &[0.5, -1.0, 2.0], 0.5),
        (0.9, &[3.0, 3.0, 3.0, 3.0, 3.0], 3.0),
    ];
    for (r, k, t) in cases {
        let config = ModelConfig::new(r, k)?;
        let exact = analytic_transform(&config, t);
        let numeric = numeric_transform(&config, t)?;
        let scale = inf_norm(&exact.matrix);
        let diff = inf_norm(&(&exact.matrix - &numeric.matrix));
        println!("r = {r}, k = {k:?}, t = {t}");
        println!("  ‖M‖∞ = {scale:.3e}");
        println!("  ‖M_exact − M_exp‖∞ = {diff:.3e} (relative {:.2e})", diff / scale);
        println!(
            "  ‖MKMᵀ − K‖∞ = {:.3e} (relative {:.2e})",
            exact.commutator_defect(),
            exact.commutator_defect() / (scale * scale)
        );
    }
    Ok(())
}
