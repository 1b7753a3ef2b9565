//! Agreement between the oracles and the moment engine.

use rayon::prelude::*;

use super::{measure_adaptive, OracleKind, OracleMeasurement};
use crate::criteria::CriteriaPoint;
use crate::error::Result;
use crate::model::{build_config, ModelConfig};
use crate::moments::{moments_at, to_quadratures, SpinInit};

/// Absolute agreement floor for the rescaled-boson oracle.
pub const AGREEMENT_TOL: f64 = 1e-5;

/// Atom numbers of the bosonization convergence study.
pub const DICKE_ATOM_NUMBERS: [u32; 4] = [4, 8, 16, 32];

/// Ten `(config, t)` points covering one and two Stokes modes, both coupling
/// signs and ratios up to 1/5.
pub fn standard_points() -> Vec<(ModelConfig, f64)> {
    let pts: [(f64, &[f64], f64); 10] = [
        (0.0, &[1.0], 0.8),
        (0.02, &[1.0], 0.5),
        (0.05, &[1.0], 1.0),
        (0.2, &[1.0], 0.7),
        (0.1, &[-1.5], 0.4),
        (0.0, &[1.0, 1.0], 1.0),
        (0.05, &[1.0, 1.0], 0.6),
        (0.05, &[1.0, 0.1], 1.5),
        (0.05, &[1.0, 0.5], 0.8),
        (0.1, &[0.5, -1.0], 0.9),
    ];
    pts.iter().map(|&(r, ks, t)| (build_config(r, ks).expect("valid"), t)).collect()
}

/// `[V, V₁₂, V₁ₛ, V₂ₛ]`, VLF entries `None` for one Stokes mode.
pub fn criteria_values(p: &CriteriaPoint) -> [Option<f64>; 4] {
    let vlf = p.vlf.map(|(_, v)| v);
    [Some(p.duan), vlf.map(|v| v.v12), vlf.map(|v| v.v1s), vlf.map(|v| v.v2s)]
}

#[derive(Debug, Clone)]
pub struct Agreement {
    pub config: ModelConfig,
    pub time: f64,
    pub oracle: OracleMeasurement,
    pub gaussian: CriteriaPoint,
    /// `|oracle − gaussian|` per criterion.
    pub discrepancy: [Option<f64>; 4],
}

impl Agreement {
    pub fn max_discrepancy(&self) -> f64 {
        self.discrepancy.iter().flatten().fold(0.0, |a, &b| a.max(b))
    }

    pub fn tolerance(&self) -> f64 {
        AGREEMENT_TOL.max(self.oracle.truncation)
    }

    pub fn passes(&self) -> bool {
        self.max_discrepancy() <= self.tolerance()
    }
}

pub fn compare(kind: OracleKind, config: &ModelConfig, t: f64, start_cutoff: u32) -> Result<Agreement> {
    let oracle = measure_adaptive(kind, config, t, start_cutoff, 512)?;
    let gaussian =
        CriteriaPoint::evaluate(&to_quadratures(&moments_at(config, SpinInit::Css, t)), t)?;
    let (o, g) = (criteria_values(&oracle.point), criteria_values(&gaussian));
    let mut discrepancy = [None; 4];
    for i in 0..4 {
        if let (Some(a), Some(b)) = (o[i], g[i]) {
            discrepancy[i] = Some((a - b).abs());
        }
    }
    Ok(Agreement { config: config.clone(), time: t, oracle, gaussian, discrepancy })
}

/// Rescaled-boson oracle against the moment engine on [`standard_points`].
pub fn boson_agreement() -> Result<Vec<Agreement>> {
    standard_points()
        .par_iter()
        .map(|(c, t)| compare(OracleKind::RescaledBoson, c, *t, 16))
        .collect()
}

/// Dicke oracle at `N=1, r=0, k₁t=0.5` for each of [`DICKE_ATOM_NUMBERS`].
pub fn dicke_convergence() -> Result<Vec<(u32, Agreement)>> {
    let config = build_config(0.0, &[1.0]).expect("valid");
    DICKE_ATOM_NUMBERS
        .par_iter()
        .map(|&n| compare(OracleKind::Dicke { n_atoms: n }, &config, 0.5, n).map(|a| (n, a)))
        .collect()
}
