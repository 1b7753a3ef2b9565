//! Plain-text model configuration.
//!
//! Grammar (one `key = value` per line, `#` starts a comment, blank lines ignored):
//!
//! ```text
//! pump_ratio = 0.05          # Ω_p/Ω_c, required
//! couplings  = 1, 0.5        # comma-separated kₙ
//!
//! [physical]                 # optional; replaces `couplings`
//! g23       = 1.0            # scalar
//! n_atoms   = 1000000        # scalar, positive integer
//! omega_m   = 2, 2           # one entry per Stokes mode
//! detuning  = 4, -4          # one entry per Stokes mode, nonzero
//! ```
//!
//! Exactly one of `couplings` or a `[physical]` block must be given. Keys are
//! unique within their section; unknown keys and sections are rejected.

use std::collections::BTreeMap;

use super::{coupling_from_physical, ModelConfig, PhysicalCoupling};
use crate::error::{Error, Result};

/// Result of parsing a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub model: ModelConfig,
    /// Present when couplings were derived from a `[physical]` block.
    pub physical: Vec<PhysicalCoupling>,
    /// Modes whose `|Ω_m/Δ|` exceeds the far-detuning limit.
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Model,
    Physical,
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{s}` as a number")))
        })
        .collect()
}

fn parse_scalar(key: &str, value: &str) -> Result<f64> {
    match parse_list(key, value)?.as_slice() {
        [v] => Ok(*v),
        _ => Err(Error::Config(format!("`{key}` takes a single value"))),
    }
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let mut entries: BTreeMap<(Section, String), (usize, String)> = BTreeMap::new();
    let mut section = Section::Model;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            section = match line {
                "[physical]" => Section::Physical,
                _ => return Err(Error::Config(format!("line {lineno}: unknown section {line}"))),
            };
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {lineno}: expected `key = value`")))?;
        let key = key.trim().to_string();
        let allowed: &[&str] = match section {
            Section::Model => &["pump_ratio", "couplings"],
            Section::Physical => &["g23", "n_atoms", "omega_m", "detuning"],
        };
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {lineno}: unknown key `{key}`")));
        }
        if entries.insert((section, key.clone()), (lineno, value.trim().to_string())).is_some() {
            return Err(Error::Config(format!("line {lineno}: duplicate key `{key}`")));
        }
    }

    let get = |s: Section, k: &str| entries.get(&(s, k.to_string())).map(|(_, v)| v.as_str());

    let pump_ratio = parse_scalar(
        "pump_ratio",
        get(Section::Model, "pump_ratio")
            .ok_or_else(|| Error::Config("missing `pump_ratio`".into()))?,
    )?;

    let has_physical = entries.keys().any(|(s, _)| *s == Section::Physical);
    let (couplings, physical) = match (get(Section::Model, "couplings"), has_physical) {
        (Some(_), true) => {
            return Err(Error::Config(
                "give either `couplings` or a `[physical]` block, not both".into(),
            ))
        }
        (None, false) => return Err(Error::Config("missing `couplings`".into())),
        (Some(v), false) => (parse_list("couplings", v)?, Vec::new()),
        (None, true) => {
            let need = |k: &str| {
                get(Section::Physical, k)
                    .ok_or_else(|| Error::Config(format!("[physical]: missing `{k}`")))
            };
            let g23 = parse_scalar("g23", need("g23")?)?;
            let n_atoms = parse_scalar("n_atoms", need("n_atoms")?)?;
            if n_atoms < 1.0 || n_atoms.fract() != 0.0 {
                return Err(Error::Config("`n_atoms` must be a positive integer".into()));
            }
            let omega = parse_list("omega_m", need("omega_m")?)?;
            let detuning = parse_list("detuning", need("detuning")?)?;
            if omega.len() != detuning.len() {
                return Err(Error::Config(format!(
                    "[physical]: {} omega_m entries but {} detuning entries",
                    omega.len(),
                    detuning.len()
                )));
            }
            let physical: Vec<_> = omega
                .iter()
                .zip(&detuning)
                .map(|(&omega_m, &detuning)| PhysicalCoupling {
                    g23,
                    omega_m,
                    n_atoms: n_atoms as u64,
                    detuning,
                })
                .collect();
            let ks = physical.iter().map(coupling_from_physical).collect::<Result<Vec<_>>>()?;
            (ks, physical)
        }
    };

    let warnings = physical
        .iter()
        .enumerate()
        .filter(|(_, p)| p.detuning_warning())
        .map(|(i, p)| {
            format!(
                "mode {}: |Ω_m/Δ| = {:.3} exceeds {}; adiabatic elimination is questionable",
                i + 1,
                (p.omega_m / p.detuning).abs(),
                super::FAR_DETUNING_LIMIT
            )
        })
        .collect();

    Ok(ConfigFile { model: ModelConfig::new(pump_ratio, &couplings)?, physical, warnings })
}
