//! Independent state-vector simulation with the spin wave as a rescaled boson,
//! compared against the Gaussian moment engine.

use spinwave_entangler::oracle::check::boson_agreement;

fn main() -> spinwave_entangler::Result<()> {
    let results = boson_agreement()?;
    println!("{:>6} {:>12} {:>5} {:>7} {:>10} {:>10}", "r", "k", "t", "cutoff", "max diff", "tail");
    for a in &results {
        println!(
            "{:>6} {:>12} {:>5} {:>7} {:>10.2e} {:>10.2e}",
            a.config.pump_ratio(),
            format!("{:?}", a.config.couplings()),
            a.time,
            a.oracle.fock_cutoff,
            a.max_discrepancy(),
            a.oracle.truncation
        );
    }
    println!("all within tolerance: {}", results.iter().all(|a| a.passes()));
    Ok(())
}
