//! Run a model described by a config file through the same path the CLI uses.

use spinwave_entangler::cli::{execute, Command, RunSpec};
use spinwave_entangler::model::parse_config;

const TEXT: &str = "\
# two Stokes fields from microscopic parameters
pump_ratio = 0.05

[physical]
g23 = 1
n_atoms = 4
omega_m = 2, 10
detuning = 40, 40
";

fn main() {
    let parsed = parse_config(TEXT).expect("valid config");
    println!("couplings: {:?}", parsed.model.couplings());
    for w in &parsed.warnings {
        println!("warning: {w}");
    }

    let mut spec = RunSpec::new(Command::Tripartite);
    spec.pump_ratio = parsed.model.pump_ratio();
    spec.couplings = parsed.model.couplings().to_vec();
    spec.steps = 6;
    let output = execute(&spec).expect("run succeeds");
    print!("{}", output.render());
}
