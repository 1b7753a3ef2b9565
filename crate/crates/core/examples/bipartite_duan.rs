//! Two-mode Duan variance for a single Stokes field and the spin wave,
//! swept over a few pump ratios.

use spinwave_entangler::criteria::{criteria_report, time_grid, THRESHOLD};
use spinwave_entangler::model::ModelConfig;
use spinwave_entangler::moments::SpinInit;

fn main() -> spinwave_entangler::Result<()> {
    let times = time_grid(5.0, 11);
    for r in [0.02, 0.05, 0.1, 0.2] {
        let config = ModelConfig::new(r, &[1.0])?;
        let report = criteria_report(&config, SpinInit::Css, &times)?;
        let v = report.duan();
        let (imin, vmin) = v
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &x)| if x < acc.1 { (i, x) } else { acc });
        println!(
            "r = {r:<5} a = {:.6}  V(0) = {:.6}  min V = {vmin:.6} at kt = {}  entangled for t > 0: {}",
            config.boson_factor(),
            v[0],
            times[imin],
            v[1..].iter().all(|&x| x < THRESHOLD),
        );
    }
    Ok(())
}
