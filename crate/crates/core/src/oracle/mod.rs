//! Brute-force state-vector oracles.
//!
//! Two models share one code path:
//!
//! * [`OracleKind::RescaledBoson`]: `S = √a b` with `b` a truncated boson
//!   started in the squeezed vacuum that reproduces the coherent-spin-state
//!   fluctuations. Its dynamics is Gaussian, so it must agree with the moment
//!   engine up to truncation.
//! * [`OracleKind::Dicke`]: `N_a` two-level atoms in the symmetric subspace,
//!   `S = N_a^{-1/2} Σᵢ |1⟩⟨2|ᵢ` exactly. This checks the bosonization itself.
//!
//! `H = iħ Σₙ kₙ (aₙ†S† − aₙS)` conserves `m − Σ nₙ` (`m` = spin level), so the
//! basis only holds the charge sectors present initially.

mod basis;
pub mod check;

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use basis::{FockBasis, Key};

use crate::criteria::CriteriaPoint;
use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::moments::{to_quadratures, MomentMatrix};
use crate::propagator::OperatorBasis;

/// Cutoff-level population accepted for acceptance runs.
pub const TAIL_LIMIT: f64 = 1e-8;

/// Initial spin-level weights below this (relative) are dropped.
const NEGLIGIBLE_WEIGHT: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    RescaledBoson,
    Dicke { n_atoms: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub kind: OracleKind,
    /// Photon-number cutoff per mode (also the boson spin cutoff).
    pub fock_cutoff: u32,
    pub model: ModelConfig,
}

impl OracleConfig {
    pub fn new(kind: OracleKind, fock_cutoff: u32, model: ModelConfig) -> Result<Self> {
        if fock_cutoff < 4 {
            return Err(Error::Config(format!("fock cutoff {fock_cutoff} < 4")));
        }
        if let OracleKind::Dicke { n_atoms: 0 } = kind {
            return Err(Error::Config("Dicke oracle needs at least one atom".into()));
        }
        Ok(Self { kind, fock_cutoff, model })
    }

    fn spin_max(&self) -> u32 {
        match self.kind {
            OracleKind::RescaledBoson => self.fock_cutoff,
            OracleKind::Dicke { n_atoms } => n_atoms,
        }
    }

    /// `⟨m+1| S† |m⟩`.
    fn spin_raise(&self, m: u32) -> f64 {
        let m = m as f64;
        match self.kind {
            OracleKind::RescaledBoson => (self.model.boson_factor() * (m + 1.0)).sqrt(),
            OracleKind::Dicke { n_atoms } => {
                let n = n_atoms as f64;
                if m >= n {
                    0.0
                } else {
                    ((m + 1.0) * (n - m) / n).sqrt()
                }
            }
        }
    }

    /// Amplitudes of the initial spin state over levels `0..=spin_max`.
    fn spin_amplitudes(&self) -> Result<Vec<f64>> {
        match self.kind {
            OracleKind::RescaledBoson => self.squeezed_vacuum(),
            OracleKind::Dicke { n_atoms } => Ok(coherent_spin_state(n_atoms, self.model.theta())),
        }
    }

    /// `sinh ρ = sin²θ/√a`, `cₘ₊₂ = −tanh ρ √((m+1)/(m+2)) cₘ`.
    fn squeezed_vacuum(&self) -> Result<Vec<f64>> {
        let a = self.model.boson_factor();
        let rho = (self.model.sin2_theta() / a.sqrt()).asinh();
        let tanh = rho.tanh();
        let mut amps = vec![0.0; self.fock_cutoff as usize + 1];
        amps[0] = 1.0 / rho.cosh().sqrt();
        let mut m = 0;
        while m + 2 < amps.len() {
            amps[m + 2] = -tanh * ((m as f64 + 1.0) / (m as f64 + 2.0)).sqrt() * amps[m];
            m += 2;
        }
        let kept: f64 = amps.iter().map(|c| c * c).sum();
        let tail = (1.0 - kept).max(0.0);
        if tail >= TAIL_LIMIT {
            return Err(Error::Truncation { tail, limit: TAIL_LIMIT });
        }
        Ok(amps)
    }

    pub fn is_boson(&self) -> bool {
        self.kind == OracleKind::RescaledBoson
    }
}

/// `(cosθ|1⟩ + sinθ|2⟩)^⊗N` over Dicke levels `m` = number of atoms in `|2⟩`.
fn coherent_spin_state(n_atoms: u32, theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    let n = n_atoms as usize;
    if s == 0.0 {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        return v;
    }
    let mut log_binom = 0.0f64;
    (0..=n)
        .map(|m| {
            if m > 0 {
                log_binom += ((n - m + 1) as f64).ln() - (m as f64).ln();
            }
            (0.5 * log_binom + (n - m) as f64 * c.ln() + m as f64 * s.ln()).exp()
        })
        .collect()
}

/// Exact state vector on a [`FockBasis`].
#[derive(Debug, Clone)]
pub struct OracleState {
    pub basis: Arc<FockBasis>,
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl OracleState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Population on truncated edges: spin level at the boson cutoff, or a
    /// Stokes mode at the photon cutoff when that cutoff binds.
    pub fn truncation_tail(&self, ocfg: &OracleConfig) -> f64 {
        let b = &self.basis;
        let stokes_binds = b.fock_max < b.spin_max;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let k = b.state(*i);
                (ocfg.is_boson() && k[0] == b.spin_max)
                    || (stokes_binds && k[1..].iter().any(|&n| n == b.fock_max))
            })
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    /// `(Σₙ ⟨aₙ†aₙ⟩, ⟨m⟩)`.
    pub fn excitation_numbers(&self) -> (f64, f64) {
        let mut photons = 0.0;
        let mut spin = 0.0;
        for (k, z) in self.basis.states().iter().zip(&self.amplitudes) {
            let p = z.norm_sqr();
            photons += p * k[1..].iter().map(|&n| n as f64).sum::<f64>();
            spin += p * k[0] as f64;
        }
        (photons, spin)
    }
}

pub fn prepare_initial(ocfg: &OracleConfig) -> Result<OracleState> {
    let spin = ocfg.spin_amplitudes()?;
    let max_w = spin.iter().map(|c| c * c).fold(0.0, f64::max);
    let charges: Vec<u32> = spin
        .iter()
        .enumerate()
        .filter(|(_, c)| *c * *c > NEGLIGIBLE_WEIGHT * max_w)
        .map(|(m, _)| m as u32)
        .collect();
    let basis = FockBasis::new(ocfg.model.n_stokes(), ocfg.spin_max(), ocfg.fock_cutoff, &charges);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.len()];
    for &m in &charges {
        let mut key = vec![0u32; ocfg.model.n_stokes() + 1];
        key[0] = m;
        let i = basis.find(&key).expect("vacuum Stokes state in every sector");
        amplitudes[i] = spin[m as usize].into();
    }
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amplitudes.iter_mut().for_each(|z| *z /= norm);
    Ok(OracleState { basis: Arc::new(basis), amplitudes, time: 0.0 })
}

/// Real antisymmetric generator `G = Σₙ kₙ (aₙ†S† − aₙS)` stored by column.
struct Generator {
    columns: Vec<Vec<(usize, f64)>>,
    norm1: f64,
}

impl Generator {
    fn new(ocfg: &OracleConfig, basis: &FockBasis) -> Self {
        let mut columns = vec![Vec::new(); basis.len()];
        for (j, key) in basis.states().iter().enumerate() {
            let m = key[0];
            for (n, &k) in ocfg.model.couplings().iter().enumerate() {
                if k == 0.0 {
                    continue;
                }
                let nn = key[n + 1];
                // aₙ† S†
                let mut up = key.clone();
                up[0] += 1;
                up[n + 1] += 1;
                if let Some(i) = basis.find(&up) {
                    columns[j].push((i, k * ((nn + 1) as f64).sqrt() * ocfg.spin_raise(m)));
                }
                // −aₙ S
                if m > 0 && nn > 0 {
                    let mut down = key.clone();
                    down[0] -= 1;
                    down[n + 1] -= 1;
                    if let Some(i) = basis.find(&down) {
                        columns[j].push((i, -k * (nn as f64).sqrt() * ocfg.spin_raise(m - 1)));
                    }
                }
            }
        }
        let norm1 = columns
            .iter()
            .map(|c| c.iter().map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        Self { columns, norm1 }
    }

    fn apply(&self, x: &[Complex64], scale: f64, out: &mut [Complex64]) {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (j, col) in self.columns.iter().enumerate() {
            let xj = x[j] * scale;
            for &(i, v) in col {
                out[i] += xj * v;
            }
        }
    }
}

/// `ψ(t) = exp(t G) ψ(0)` by Taylor series on substeps with `‖G dt‖₁ ≤ 1`.
pub fn evolve(state: &OracleState, ocfg: &OracleConfig, t: f64) -> Result<OracleState> {
    if state.basis.n_stokes != ocfg.model.n_stokes() {
        return Err(Error::Contract("state and oracle config disagree on mode count".into()));
    }
    let gen = Generator::new(ocfg, &state.basis);
    let steps = (t.abs() * gen.norm1).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let dim = state.amplitudes.len();
    let mut psi = state.amplitudes.clone();
    let mut term = vec![Complex64::new(0.0, 0.0); dim];
    let mut next = term.clone();
    for _ in 0..steps {
        term.copy_from_slice(&psi);
        for order in 1..=60 {
            gen.apply(&term, dt / order as f64, &mut next);
            std::mem::swap(&mut term, &mut next);
            let size: f64 = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            psi.iter_mut().zip(&term).for_each(|(p, d)| *p += d);
            if size < 1e-18 {
                break;
            }
        }
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "oracle evolution lost normalization: ‖ψ‖ = {norm} after {steps} steps"
        )));
    }
    Ok(OracleState { basis: state.basis.clone(), amplitudes: psi, time: state.time + t })
}

type Sparse = HashMap<Key, Complex64>;

#[derive(Clone, Copy)]
enum Ladder {
    Lower,
    Raise,
}

/// Applies one element of the operator vector (index in [`OperatorBasis`]
/// ordering) without truncation.
fn apply_operator(ocfg: &OracleConfig, op: usize, v: &Sparse) -> Sparse {
    let n_stokes = ocfg.model.n_stokes();
    let slot = if op / 2 == n_stokes { 0 } else { op / 2 + 1 };
    let dir = if op.is_multiple_of(2) { Ladder::Lower } else { Ladder::Raise };
    let mut out = Sparse::with_capacity(v.len());
    for (key, &amp) in v {
        let level = key[slot];
        let (coeff, new_level) = match (slot, dir) {
            (_, Ladder::Lower) if level == 0 => continue,
            (0, Ladder::Lower) => (ocfg.spin_raise(level - 1), level - 1),
            (0, Ladder::Raise) => (ocfg.spin_raise(level), level + 1),
            (_, Ladder::Lower) => ((level as f64).sqrt(), level - 1),
            (_, Ladder::Raise) => (((level + 1) as f64).sqrt(), level + 1),
        };
        if coeff == 0.0 {
            continue;
        }
        let mut k = key.clone();
        k[slot] = new_level;
        *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += amp * coeff;
    }
    out
}

fn inner(u: &Sparse, v: &Sparse) -> Complex64 {
    u.iter()
        .filter_map(|(k, a)| v.get(k).map(|b| a.conj() * b))
        .sum()
}

/// Centered operator-ordered moments `⟨δξᵢ δξⱼ⟩` of the state.
pub fn state_moments(state: &OracleState, ocfg: &OracleConfig) -> MomentMatrix {
    let ob = OperatorBasis::new(ocfg.model.n_stokes());
    let psi: Sparse = state
        .basis
        .states()
        .iter()
        .cloned()
        .zip(state.amplitudes.iter().copied())
        .filter(|(_, z)| z.norm_sqr() > 0.0)
        .collect();
    let applied: Vec<Sparse> = (0..ob.dim()).map(|i| apply_operator(ocfg, i, &psi)).collect();
    let means: Vec<Complex64> = applied.iter().map(|v| inner(&psi, v)).collect();
    // ⟨ξᵢ ξⱼ⟩ = ⟨ξᵢ† ψ | ξⱼ ψ⟩
    let c = DMatrix::from_fn(ob.dim(), ob.dim(), |i, j| {
        (inner(&applied[OperatorBasis::adjoint(i)], &applied[j]) - means[i] * means[j]).re
    });
    MomentMatrix { matrix: c, config: ocfg.model.clone(), time: state.time }
}

/// Criteria evaluated from the exact state, through the same code path as the
/// moment engine.
#[derive(Debug, Clone)]
pub struct OracleMeasurement {
    pub point: CriteriaPoint,
    pub moments: MomentMatrix,
    /// Cutoff-level population of the measured state.
    pub truncation: f64,
    pub fock_cutoff: u32,
}

pub fn measure_criteria(state: &OracleState, ocfg: &OracleConfig) -> Result<OracleMeasurement> {
    let moments = state_moments(state, ocfg);
    let point = CriteriaPoint::evaluate(&to_quadratures(&moments), state.time)?;
    Ok(OracleMeasurement {
        point,
        moments,
        truncation: state.truncation_tail(ocfg),
        fock_cutoff: ocfg.fock_cutoff,
    })
}

/// Evolves to `t` and measures, doubling the cutoff from `start_cutoff` until
/// the cutoff-level population drops below [`TAIL_LIMIT`].
pub fn measure_adaptive(
    kind: OracleKind,
    model: &ModelConfig,
    t: f64,
    start_cutoff: u32,
    max_cutoff: u32,
) -> Result<OracleMeasurement> {
    let mut cutoff = start_cutoff.max(4);
    loop {
        let ocfg = OracleConfig::new(kind, cutoff, model.clone())?;
        let attempt = prepare_initial(&ocfg).and_then(|s| evolve(&s, &ocfg, t));
        match attempt {
            Ok(state) => {
                let tail = state.truncation_tail(&ocfg);
                if tail < TAIL_LIMIT {
                    return measure_criteria(&state, &ocfg);
                }
                if cutoff >= max_cutoff {
                    return Err(Error::Truncation { tail, limit: TAIL_LIMIT });
                }
            }
            Err(Error::Truncation { tail, limit }) if cutoff >= max_cutoff => {
                return Err(Error::Truncation { tail, limit })
            }
            Err(Error::Truncation { .. }) => {}
            Err(e) => return Err(e),
        }
        cutoff = (cutoff * 2).min(max_cutoff);
    }
}
