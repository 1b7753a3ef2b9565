use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinwave_entangler::cli::{self, oracle_summary, render_svg, CliError, Command, OutputFormat, RunSpec};
use spinwave_entangler::moments::SpinInit;

#[derive(Parser)]
#[command(name = "entangler", version, about = "EIT spin-wave entangler: moment dynamics and CV entanglement criteria")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Duan V between Stokes mode 1 and the spin wave
    Bipartite(Opts),
    /// VLF correlations for two Stokes modes
    Tripartite(Opts),
    /// Pairwise Duan values for N Stokes modes
    Nmode(Opts),
    /// Four bipartite panels, Ω_p/Ω_c ∈ {1/50, 1/20, 1/10, 1/5}
    Fig2(Opts),
    /// Four tripartite panels, k2 ∈ {0.1, 0.5, 1, 10}
    Fig3(Opts),
    /// Exact-state oracles against the moment engine
    OracleCheck(Opts),
    /// Re-run the spec recorded in a JSON output file
    Replay {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Css,
    Vacuum,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Opts {
    /// Ω_p/Ω_c, 0 ≤ r < 1
    #[arg(long)]
    ratio: Option<f64>,
    /// Comma-separated couplings k1,k2,…
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    k: Option<Vec<f64>>,
    /// Second coupling (tripartite; k1 stays at its current value)
    #[arg(long, allow_negative_numbers = true)]
    k2: Option<f64>,
    /// Grid end in units of k1·t
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    spin_init: Option<InitArg>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Model config file (pump_ratio, couplings, optional [physical] block)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write an SVG line chart of the V series
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn build_spec(command: Command, o: &Opts) -> Result<RunSpec, CliError> {
    let mut spec = RunSpec::new(command);
    if let Some(path) = &o.config {
        for w in spec.apply_config_file(path)? {
            eprintln!("warning: {w}");
        }
    }
    if let Some(r) = o.ratio {
        spec.pump_ratio = r;
    }
    if let Some(k) = &o.k {
        spec.couplings = k.clone();
    }
    if let Some(k2) = o.k2 {
        spec.couplings.truncate(1);
        spec.couplings.push(k2);
    }
    if let Some(t) = o.tmax {
        spec.t_max = t;
    }
    if let Some(n) = o.steps {
        spec.steps = n;
    }
    if let Some(init) = o.spin_init {
        spec.spin_init = match init {
            InitArg::Css => SpinInit::Css,
            InitArg::Vacuum => SpinInit::Vacuum,
        };
    }
    if let Some(f) = o.format {
        spec.format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    spec.out = o.out.clone();
    Ok(spec)
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    let (command, opts) = match cli.command {
        Cmd::Bipartite(o) => (Command::Bipartite, o),
        Cmd::Tripartite(o) => (Command::Tripartite, o),
        Cmd::Nmode(o) => (Command::Nmode, o),
        Cmd::Fig2(o) => (Command::Fig2, o),
        Cmd::Fig3(o) => (Command::Fig3, o),
        Cmd::OracleCheck(o) => (Command::OracleCheck, o),
        Cmd::Replay { input, out } => {
            let text = std::fs::read_to_string(&input).map_err(|e| CliError::Io(input.clone(), e))?;
            let mut spec = RunSpec::from_output_json(&text)?;
            spec.out = out;
            cli::run(&spec)?;
            return Ok(());
        }
    };
    let spec = build_spec(command, &opts)?;
    let output = cli::run(&spec)?;
    if command == Command::OracleCheck {
        for line in oracle_summary(&output.table) {
            eprintln!("{line}");
        }
    }
    if let Some(path) = &opts.svg {
        let title = format!("{command:?} (spin init {})", spec.spin_init);
        std::fs::write(path, render_svg(&output.table, &title, 8.0))
            .map_err(|e| CliError::Io(path.clone(), e))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
