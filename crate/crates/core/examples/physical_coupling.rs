//! From microscopic parameters to a normalized coupling and back to
//! physical interaction times.

use spinwave_entangler::model::{coupling_from_physical, interaction_time_seconds, PhysicalCoupling};

fn main() -> spinwave_entangler::Result<()> {
    for (omega_m, detuning) in [(2.0, 40.0), (2.0, 10.0)] {
        let p = PhysicalCoupling { g23: 1e-3, omega_m, n_atoms: 1_000_000, detuning };
        let k = coupling_from_physical(&p)?;
        println!("Ω_m = {omega_m}, Δ = {detuning}: k = {k:.4}  far-detuned: {}", !p.detuning_warning());
    }
    let k_per_cm = 2.0;
    for kt in [1.0, 2.5, 5.0] {
        println!("k = {k_per_cm} cm⁻¹, kt = {kt}: t = {:.3e} s", interaction_time_seconds(k_per_cm, kt));
    }
    Ok(())
}
