//! Run specifications and the tables each command produces.
//!
//! Grids are in normalized time `k₁t`; the evolution time of a grid point `τ`
//! is `τ/|k₁|`. Output is a [`Table`] plus the [`RunSpec`] that produced it,
//! written as CSV (spec echoed in a leading `#` comment) or JSON.

mod svg;
mod table;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use svg::render as render_svg;
pub use table::{format_value, RunOutput, Table};

use crate::criteria::{classify, criteria_report, pairwise_duan, time_grid, CriteriaReport};
use crate::error::Error;
use crate::model::{build_config, parse_config, ModelConfig};
use crate::moments::{moments_at, to_quadratures, SpinInit};
use crate::oracle::check::{boson_agreement, dicke_convergence, Agreement};

/// Panels of the bipartite figure: Ω_p/Ω_c with k₁ = 1.
pub const FIG2_RATIOS: [f64; 4] = [1.0 / 50.0, 1.0 / 20.0, 1.0 / 10.0, 1.0 / 5.0];
/// Panels of the tripartite figure: k₂ with k₁ = 1, Ω_p/Ω_c = 1/20.
pub const FIG3_K2: [f64; 4] = [0.1, 0.5, 1.0, 10.0];
pub const FIG3_RATIO: f64 = 1.0 / 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bipartite,
    Tripartite,
    Nmode,
    Fig2,
    Fig3,
    OracleCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub command: Command,
    pub pump_ratio: f64,
    pub couplings: Vec<f64>,
    /// Grid end in units of `k₁t`.
    pub t_max: f64,
    /// Number of grid points, endpoints included.
    pub steps: usize,
    pub spin_init: SpinInit,
    pub format: OutputFormat,
    /// Destination only; not echoed into output metadata.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunSpec {
    /// Defaults for `command`: 501 points over `k₁t ∈ [0, 5]`, `r = 1/20`.
    pub fn new(command: Command) -> Self {
        let couplings = match command {
            Command::Tripartite => vec![1.0, 1.0],
            Command::Nmode => vec![1.0, 1.0, 1.0],
            _ => vec![1.0],
        };
        Self {
            command,
            pump_ratio: FIG3_RATIO,
            couplings,
            t_max: 5.0,
            steps: 501,
            spin_init: SpinInit::Css,
            format: OutputFormat::Csv,
            out: None,
        }
    }

    /// Takes `pump_ratio` and `couplings` from a model config file.
    pub fn apply_config_file(&mut self, path: &Path) -> Result<Vec<String>, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        let cf = parse_config(&text)?;
        self.pump_ratio = cf.model.pump_ratio();
        self.couplings = cf.model.couplings().to_vec();
        Ok(cf.warnings)
    }

    pub fn validate(&self) -> Result<ModelConfig, CliError> {
        if self.steps < 2 {
            return Err(Error::Config(format!("steps = {} (need ≥ 2)", self.steps)).into());
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max = {} (need > 0)", self.t_max)).into());
        }
        let config = build_config(self.pump_ratio, &self.couplings)?;
        let n = config.n_stokes();
        match self.command {
            Command::Bipartite if n != 1 => {
                return Err(Error::Config(format!("bipartite takes one coupling, got {n}")).into())
            }
            Command::Tripartite if n != 2 => {
                return Err(Error::Config(format!("tripartite takes two couplings, got {n}")).into())
            }
            _ => {}
        }
        if config.couplings()[0] == 0.0 {
            return Err(Error::Config("k₁ = 0: time axis is normalized by k₁".into()).into());
        }
        Ok(config)
    }

    /// Recovers the spec from a JSON output file.
    pub fn from_output_json(text: &str) -> Result<Self, CliError> {
        let out: RunOutput =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("bad run output: {e}")))?;
        Ok(out.spec)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("oracle check failed: {0}")]
    Check(String),
}

impl CliError {
    /// 2 for invalid input, 3 for numerical failure, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(
                Error::Numerical(_) | Error::Truncation { .. } | Error::Degenerate(_),
            )
            | CliError::Check(_) => 3,
            CliError::Model(_) => 2,
            CliError::Io(..) => 1,
        }
    }
}

fn normalized_grid(config: &ModelConfig, spec: &RunSpec) -> (Vec<f64>, Vec<f64>) {
    let grid = time_grid(spec.t_max, spec.steps);
    let k1 = config.couplings()[0].abs();
    let times = grid.iter().map(|g| g / k1).collect();
    (grid, times)
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn label(v: f64) -> String {
    format!("{v}")
}

fn bipartite(config: &ModelConfig, spec: &RunSpec) -> Result<Table, CliError> {
    let (grid, times) = normalized_grid(config, spec);
    let report = criteria_report(config, spec.spin_init, &times)?;
    let mut table = Table::new(vec!["t".into(), "V".into(), "duan_entangled".into()]);
    for ((g, p), f) in grid.iter().zip(&report.points).zip(classify(&report)) {
        table.rows.push(vec![*g, p.duan, flag(f.duan)]);
    }
    Ok(table)
}

fn tripartite_rows(grid: &[f64], report: &CriteriaReport) -> Vec<Vec<f64>> {
    grid.iter()
        .zip(&report.points)
        .zip(classify(report))
        .map(|((g, p), f)| {
            let (gs, v) = p.vlf.expect("two Stokes modes");
            vec![
                *g,
                p.duan,
                v.v12,
                v.v1s,
                v.v2s,
                gs.g1,
                gs.g2,
                gs.gs,
                flag(f.pairs[0]),
                flag(f.pairs[1]),
                flag(f.pairs[2]),
                flag(f.tripartite),
            ]
        })
        .collect()
}

fn tripartite(config: &ModelConfig, spec: &RunSpec) -> Result<Table, CliError> {
    let (grid, times) = normalized_grid(config, spec);
    let report = criteria_report(config, spec.spin_init, &times)?;
    let cols = [
        "t", "V", "V12", "V1s", "V2s", "g1", "g2", "gs", "v12_lt4", "v1s_lt4", "v2s_lt4", "tripartite",
    ];
    let mut table = Table::new(cols.iter().map(|s| s.to_string()).collect());
    table.rows = tripartite_rows(&grid, &report);
    Ok(table)
}

fn nmode(config: &ModelConfig, spec: &RunSpec) -> Result<Table, CliError> {
    let (grid, times) = normalized_grid(config, spec);
    let rows: Vec<Vec<(String, f64)>> = times
        .par_iter()
        .map(|&t| {
            pairwise_duan(&to_quadratures(&moments_at(config, spec.spin_init, t)))
                .into_iter()
                .map(|(a, b, v)| (format!("V_{a}{b}"), v))
                .collect()
        })
        .collect();
    let mut columns = vec!["t".to_string()];
    columns.extend(rows[0].iter().map(|(n, _)| n.clone()));
    let mut table = Table::new(columns);
    for (g, row) in grid.iter().zip(rows) {
        table.rows.push(std::iter::once(*g).chain(row.into_iter().map(|(_, v)| v)).collect());
    }
    Ok(table)
}

fn fig2(spec: &RunSpec) -> Result<Table, CliError> {
    let grid = time_grid(spec.t_max, spec.steps);
    let reports = FIG2_RATIOS
        .iter()
        .map(|&r| criteria_report(&build_config(r, &[1.0])?, spec.spin_init, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let mut columns = vec!["t".to_string()];
    columns.extend(FIG2_RATIOS.iter().map(|r| format!("V_r={}", label(*r))));
    let mut table = Table::new(columns);
    for (i, g) in grid.iter().enumerate() {
        table.rows.push(std::iter::once(*g).chain(reports.iter().map(|rep| rep.points[i].duan)).collect());
    }
    Ok(table)
}

fn fig3(spec: &RunSpec) -> Result<Table, CliError> {
    let grid = time_grid(spec.t_max, spec.steps);
    let reports = FIG3_K2
        .iter()
        .map(|&k2| criteria_report(&build_config(FIG3_RATIO, &[1.0, k2])?, spec.spin_init, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let mut columns = vec!["t".to_string()];
    for k2 in FIG3_K2 {
        for name in ["V12", "V1s", "V2s", "g1", "g2", "gs"] {
            columns.push(format!("{name}_k2={}", label(k2)));
        }
    }
    let mut table = Table::new(columns);
    for (i, g) in grid.iter().enumerate() {
        let mut row = vec![*g];
        for rep in &reports {
            let (gs, v) = rep.points[i].vlf.expect("two Stokes modes");
            row.extend([v.v12, v.v1s, v.v2s, gs.g1, gs.g2, gs.gs]);
        }
        table.rows.push(row);
    }
    Ok(table)
}

fn agreement_row(kind: f64, n_atoms: f64, a: &Agreement) -> Vec<f64> {
    let ks = a.config.couplings();
    let mut row = vec![
        a.time,
        kind,
        n_atoms,
        a.config.pump_ratio(),
        ks[0],
        ks.get(1).copied().unwrap_or(0.0),
        a.oracle.fock_cutoff as f64,
        a.oracle.truncation,
    ];
    row.extend(a.discrepancy.iter().map(|d| d.unwrap_or(0.0)));
    row.push(a.max_discrepancy());
    row.push(a.tolerance());
    row
}

/// Returns the table and a list of human-readable failures.
fn oracle_check() -> Result<(Table, Vec<String>), CliError> {
    let cols = [
        "t", "dicke", "n_atoms", "ratio", "k1", "k2", "cutoff", "tail", "dV", "dV12", "dV1s",
        "dV2s", "max_diff", "tolerance",
    ];
    let mut table = Table::new(cols.iter().map(|s| s.to_string()).collect());
    let mut failures = Vec::new();
    for (i, a) in boson_agreement()?.iter().enumerate() {
        if !a.passes() {
            failures.push(format!(
                "boson point {}: discrepancy {:.3e} > {:.1e}",
                i + 1,
                a.max_discrepancy(),
                a.tolerance()
            ));
        }
        table.rows.push(agreement_row(0.0, 0.0, a));
    }
    let dicke = dicke_convergence()?;
    for w in dicke.windows(2) {
        if w[1].1.max_discrepancy() >= w[0].1.max_discrepancy() {
            failures.push(format!("Dicke discrepancy not decreasing from N_a={} to {}", w[0].0, w[1].0));
        }
    }
    for (n, a) in &dicke {
        table.rows.push(agreement_row(1.0, *n as f64, a));
    }
    Ok((table, failures))
}

/// Executes a run and returns the output without writing it.
pub fn execute(spec: &RunSpec) -> Result<RunOutput, CliError> {
    let config = spec.validate()?;
    let mut notes = vec![format!("spin_init: {}", spec.spin_init)];
    let table = match spec.command {
        Command::Bipartite => bipartite(&config, spec)?,
        Command::Tripartite => tripartite(&config, spec)?,
        Command::Nmode => nmode(&config, spec)?,
        Command::Fig2 => {
            notes.push("panels: k1 = 1, Ω_p/Ω_c ∈ {1/50, 1/20, 1/10, 1/5}".into());
            fig2(spec)?
        }
        Command::Fig3 => {
            notes.push("panels: k1 = 1, Ω_p/Ω_c = 1/20, k2 ∈ {0.1, 0.5, 1, 10}".into());
            fig3(spec)?
        }
        Command::OracleCheck => {
            let (table, failures) = oracle_check()?;
            notes.push("oracle rows: dicke = 0 rescaled boson, 1 Dicke; spin_init fixed to css".into());
            if !failures.is_empty() {
                return Err(CliError::Check(failures.join("; ")));
            }
            table
        }
    };
    Ok(RunOutput { spec: spec.clone(), notes, table })
}

impl RunOutput {
    pub fn render(&self) -> String {
        match self.spec.format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Executes and writes to `spec.out` (stdout when unset). Returns the output.
pub fn run(spec: &RunSpec) -> Result<RunOutput, CliError> {
    let output = execute(spec)?;
    let text = output.render();
    match &spec.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e))?,
        None => print!("{text}"),
    }
    Ok(output)
}

/// Summary of the largest discrepancies in an `oracle-check` table.
pub fn oracle_summary(table: &Table) -> Vec<String> {
    let col = |n: &str| table.column(n).unwrap_or_default();
    let (kind, diff, tail) = (col("dicke"), col("max_diff"), col("tail"));
    let boson_max = kind.iter().zip(&diff).filter(|(k, _)| **k == 0.0).map(|(_, d)| *d).fold(0.0, f64::max);
    let tail_max = tail.iter().cloned().fold(0.0, f64::max);
    let mut lines = vec![format!(
        "rescaled boson vs Gaussian: max |Δ| = {boson_max:.3e} (max cutoff tail {tail_max:.1e})"
    )];
    for (i, _) in kind.iter().enumerate().filter(|(_, k)| **k == 1.0) {
        lines.push(format!(
            "Dicke N_a = {:>3}: |V_dicke − V_gauss| = {:.3e}",
            table.rows[i][2], diff[i]
        ));
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(command: Command) -> RunSpec {
        RunSpec { steps: 51, ..RunSpec::new(command) }
    }

    #[test]
    fn validation() {
        let bad = [
            RunSpec { pump_ratio: 1.5, ..spec(Command::Bipartite) },
            RunSpec { steps: 1, ..spec(Command::Bipartite) },
            RunSpec { t_max: 0.0, ..spec(Command::Bipartite) },
            RunSpec { couplings: vec![1.0, 1.0], ..spec(Command::Bipartite) },
            RunSpec { couplings: vec![1.0], ..spec(Command::Tripartite) },
            RunSpec { couplings: vec![0.0, 1.0], ..spec(Command::Nmode) },
        ];
        for s in bad {
            let e = execute(&s).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{s:?}: {e}");
        }
    }

    #[test]
    fn fig2_first_row() {
        let out = execute(&spec(Command::Fig2)).unwrap();
        assert_eq!(out.table.columns, ["t", "V_r=0.02", "V_r=0.05", "V_r=0.1", "V_r=0.2"]);
        let row = &out.table.rows[0];
        assert_eq!(row[0], 0.0);
        assert!((row[2] - 3.99005).abs() < 1e-4);
    }

    #[test]
    fn time_axis_is_normalized_by_k1() {
        let s = RunSpec { couplings: vec![2.0], ..spec(Command::Bipartite) };
        let out = execute(&s).unwrap();
        let unit = execute(&RunSpec { pump_ratio: 0.05, ..spec(Command::Bipartite) }).unwrap();
        assert_eq!(out.table.rows, unit.table.rows);
    }

    #[test]
    fn nmode_columns() {
        let out = execute(&spec(Command::Nmode)).unwrap();
        assert_eq!(out.table.columns, ["t", "V_12", "V_13", "V_1s", "V_23", "V_2s", "V_3s"]);
    }

    #[test]
    fn json_round_trip() {
        let s = RunSpec { format: OutputFormat::Json, couplings: vec![1.0, 0.5], ..spec(Command::Tripartite) };
        let out = execute(&s).unwrap();
        let back = RunSpec::from_output_json(&out.to_json()).unwrap();
        assert_eq!(back, s);
        assert_eq!(execute(&back).unwrap().render(), out.render());
    }

    #[test]
    fn csv_layout() {
        let out = execute(&spec(Command::Bipartite)).unwrap();
        let csv = out.to_csv();
        let lines: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], "t,V,duan_entangled");
        assert_eq!(lines.len(), 52);
        assert!(lines[1].starts_with("0.00000000e0,3.99004981e0,"));
    }
}
