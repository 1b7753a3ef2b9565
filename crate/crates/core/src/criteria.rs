//! Duan and van Loock–Furusawa variance criteria.
//!
//! Quadratures use `x = a + a†`, so vacuum noise is 1 per quadrature and every
//! criterion is compared against 4 with a strict inequality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::moments::{moments_at, to_quadratures, Mode, QuadratureCovariance, SpinInit};

/// Separability bound shared by every criterion here.
pub const THRESHOLD: f64 = 4.0;

/// `Var(x_a − x_b) + Var(p_a + p_b)`.
pub fn duan_pair(cov: &QuadratureCovariance, a: Mode, b: Mode) -> Result<f64> {
    let (xa, pa, xb, pb) = (cov.x(a)?, cov.p(a)?, cov.x(b)?, cov.p(b)?);
    Ok(cov.variance(&[(xa, 1.0), (xb, -1.0)]) + cov.variance(&[(pa, 1.0), (pb, 1.0)]))
}

/// Duan correlation between Stokes mode `mode` (zero-based) and the spin wave.
pub fn duan_v(cov: &QuadratureCovariance, mode: usize) -> Result<f64> {
    duan_pair(cov, Mode::Stokes(mode), Mode::Spin)
}

/// Duan values for every unordered pair among all Stokes modes and the spin.
pub fn pairwise_duan(cov: &QuadratureCovariance) -> Vec<(Mode, Mode, f64)> {
    let modes: Vec<Mode> =
        (0..cov.n_stokes()).map(Mode::Stokes).chain(std::iter::once(Mode::Spin)).collect();
    let mut out = Vec::new();
    for (i, &a) in modes.iter().enumerate() {
        for &b in &modes[i + 1..] {
            out.push((a, b, duan_pair(cov, a, b).expect("modes drawn from the covariance")));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainSet {
    pub g1: f64,
    pub g2: f64,
    pub gs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VlfValues {
    pub v12: f64,
    pub v1s: f64,
    pub v2s: f64,
}

impl VlfValues {
    pub fn as_array(&self) -> [f64; 3] {
        [self.v12, self.v1s, self.v2s]
    }
}

/// Which VLF inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VlfPair {
    /// `V(x₁ − x₂) + V(p₁ + p₂ + g_s p_s)`
    StokesStokes,
    /// `V(x₁ − x_s) + V(p₁ + g₂ p₂ + p_s)`
    FirstSpin,
    /// `V(x₂ − x_s) + V(g₁ p₁ + p₂ + p_s)`
    SecondSpin,
}

struct VlfIndices {
    x1: usize,
    x2: usize,
    xs: usize,
    p: [usize; 3],
}

fn vlf_indices(cov: &QuadratureCovariance) -> Result<VlfIndices> {
    if cov.n_stokes() < 2 {
        return Err(Error::Contract(format!(
            "VLF criteria need two Stokes modes, got {}",
            cov.n_stokes()
        )));
    }
    let (m1, m2) = (Mode::Stokes(0), Mode::Stokes(1));
    Ok(VlfIndices {
        x1: cov.x(m1)?,
        x2: cov.x(m2)?,
        xs: cov.x(Mode::Spin)?,
        p: [cov.p(m1)?, cov.p(m2)?, cov.p(Mode::Spin)?],
    })
}

impl VlfPair {
    /// Slot (in `p₁, p₂, p_s` order) carrying the free gain.
    fn gain_slot(self) -> usize {
        match self {
            VlfPair::StokesStokes => 2,
            VlfPair::FirstSpin => 1,
            VlfPair::SecondSpin => 0,
        }
    }
}

/// Variance of the momentum combination of `pair` with its free gain set to `gain`.
pub fn vlf_momentum_variance(cov: &QuadratureCovariance, pair: VlfPair, gain: f64) -> Result<f64> {
    let idx = vlf_indices(cov)?;
    let mut terms = idx.p.map(|i| (i, 1.0));
    terms[pair.gain_slot()].1 = gain;
    Ok(cov.variance(&terms))
}

/// Closed-form minimizers of each momentum variance:
/// `gᵢ = −(Σ_{j≠i} ⟨pᵢ pⱼ⟩) / ⟨pᵢ²⟩` with centered moments.
pub fn vlf_gains(cov: &QuadratureCovariance) -> Result<GainSet> {
    let idx = vlf_indices(cov)?;
    let g = |slot: usize| -> Result<f64> {
        let pi = idx.p[slot];
        let var = cov.cov(pi, pi);
        if var <= 0.0 || !var.is_finite() {
            return Err(Error::Degenerate(format!("momentum variance {var} in gain denominator")));
        }
        let cross: f64 = idx.p.iter().filter(|&&j| j != pi).map(|&j| cov.cov(pi, j)).sum();
        Ok(-cross / var)
    };
    Ok(GainSet { g1: g(0)?, g2: g(1)?, gs: g(2)? })
}

pub fn vlf_correlations(cov: &QuadratureCovariance, gains: &GainSet) -> Result<VlfValues> {
    let idx = vlf_indices(cov)?;
    let xvar = |a: usize, b: usize| cov.variance(&[(a, 1.0), (b, -1.0)]);
    Ok(VlfValues {
        v12: xvar(idx.x1, idx.x2) + vlf_momentum_variance(cov, VlfPair::StokesStokes, gains.gs)?,
        v1s: xvar(idx.x1, idx.xs) + vlf_momentum_variance(cov, VlfPair::FirstSpin, gains.g2)?,
        v2s: xvar(idx.x2, idx.xs) + vlf_momentum_variance(cov, VlfPair::SecondSpin, gains.g1)?,
    })
}

/// All criteria at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaPoint {
    pub time: f64,
    /// Duan value between Stokes mode 1 and the spin.
    pub duan: f64,
    /// Present when there are at least two Stokes modes.
    pub vlf: Option<(GainSet, VlfValues)>,
}

impl CriteriaPoint {
    pub fn evaluate(cov: &QuadratureCovariance, time: f64) -> Result<Self> {
        let duan = duan_v(cov, 0)?;
        let vlf = if cov.n_stokes() >= 2 {
            let gains = vlf_gains(cov)?;
            Some((gains, vlf_correlations(cov, &gains)?))
        } else {
            None
        };
        Ok(Self { time, duan, vlf })
    }
}

/// Entanglement witnesses triggered at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EntanglementFlags {
    pub duan: bool,
    /// `[V₁₂ < 4, V₁ₛ < 4, V₂ₛ < 4]`; all false without VLF data.
    pub pairs: [bool; 3],
    /// At least two VLF inequalities hold.
    pub tripartite: bool,
}

impl EntanglementFlags {
    pub fn from_values(duan: f64, vlf: Option<&VlfValues>) -> Self {
        let pairs = vlf.map(|v| v.as_array().map(|x| x < THRESHOLD)).unwrap_or_default();
        Self {
            duan: duan < THRESHOLD,
            pairs,
            tripartite: pairs.iter().filter(|&&b| b).count() >= 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub points: Vec<CriteriaPoint>,
}

impl CriteriaReport {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.time).collect()
    }

    pub fn duan(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.duan).collect()
    }

    /// VLF series, or `None` for a single Stokes mode.
    pub fn vlf(&self) -> Option<Vec<VlfValues>> {
        self.points.iter().map(|p| p.vlf.map(|(_, v)| v)).collect()
    }

    pub fn gains(&self) -> Option<Vec<GainSet>> {
        self.points.iter().map(|p| p.vlf.map(|(g, _)| g)).collect()
    }
}

/// Flags per time point, recomputed from the stored series.
pub fn classify(report: &CriteriaReport) -> Vec<EntanglementFlags> {
    report
        .points
        .iter()
        .map(|p| EntanglementFlags::from_values(p.duan, p.vlf.as_ref().map(|(_, v)| v)))
        .collect()
}

/// Evaluates the criteria along a grid of evolution times.
pub fn criteria_report(config: &ModelConfig, init: SpinInit, times: &[f64]) -> Result<CriteriaReport> {
    let points = times
        .par_iter()
        .map(|&t| CriteriaPoint::evaluate(&to_quadratures(&moments_at(config, init, t)), t))
        .collect::<Result<Vec<_>>>()?;
    Ok(CriteriaReport { points })
}

/// `n` evenly spaced points on `[0, t_max]`.
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect(),
    }
}
