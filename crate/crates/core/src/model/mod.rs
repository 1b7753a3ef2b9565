//! Physical configuration of the entangler and the dimensionless quantities
//! derived from it.
//!
//! Time is normalized so that the first coupling sets the unit: every figure
//! and CLI grid is expressed in `k₁t`. Couplings may carry either sign (the
//! sign of a coupling follows the detuning of its mixing field).

mod config_file;

pub use config_file::{parse_config, ConfigFile};

use crate::error::{Error, Result};

/// Speed of light in cm/s, used to turn a spatial coupling rate (cm⁻¹) into a time.
pub const SPEED_OF_LIGHT_CM_PER_S: f64 = 2.997_924_58e10;

/// Threshold on `|Ω_m/Δ|` above which adiabatic elimination becomes questionable.
pub const FAR_DETUNING_LIMIT: f64 = 0.1;

/// Mixing angle, bosonization factor and Stokes couplings for one run.
///
/// `theta` and `boson_factor` are derived from `pump_ratio` on construction
/// and cannot be set independently.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    couplings: Vec<f64>,
    pump_ratio: f64,
    theta: f64,
    boson_factor: f64,
}

impl ModelConfig {
    /// Validates `0 ≤ r < 1` and a nonempty, finite list of couplings.
    pub fn new(pump_ratio: f64, couplings: &[f64]) -> Result<Self> {
        if !pump_ratio.is_finite() || !(0.0..1.0).contains(&pump_ratio) {
            return Err(Error::InvalidRatio(pump_ratio));
        }
        if couplings.is_empty() {
            return Err(Error::Config("at least one Stokes coupling is required".into()));
        }
        if let Some(k) = couplings.iter().find(|k| !k.is_finite()) {
            return Err(Error::Config(format!("coupling {k} is not finite")));
        }
        let r2 = pump_ratio * pump_ratio;
        Ok(Self {
            couplings: couplings.to_vec(),
            pump_ratio,
            theta: pump_ratio.atan(),
            // cos²θ − sin²θ written without cancellation
            boson_factor: (1.0 - r2) / (1.0 + r2),
        })
    }

    pub fn n_stokes(&self) -> usize {
        self.couplings.len()
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// Ω_p/Ω_c.
    pub fn pump_ratio(&self) -> f64 {
        self.pump_ratio
    }

    /// Mixing angle θ = arctan(Ω_p/Ω_c).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `a = cos²θ − sin²θ`, the effective spin commutator `[S, S†]`.
    pub fn boson_factor(&self) -> f64 {
        self.boson_factor
    }

    pub fn cos2_theta(&self) -> f64 {
        1.0 / (1.0 + self.pump_ratio * self.pump_ratio)
    }

    pub fn sin2_theta(&self) -> f64 {
        let r2 = self.pump_ratio * self.pump_ratio;
        r2 / (1.0 + r2)
    }

    /// Collective rate β = √(a Σ kₙ²).
    pub fn collective_rate(&self) -> f64 {
        (self.boson_factor * self.couplings.iter().map(|k| k * k).sum::<f64>()).sqrt()
    }

    /// Same configuration with a different coupling list.
    pub fn with_couplings(&self, couplings: &[f64]) -> Result<Self> {
        Self::new(self.pump_ratio, couplings)
    }
}

/// Shorthand for [`ModelConfig::new`].
pub fn build_config(pump_ratio: f64, couplings: &[f64]) -> Result<ModelConfig> {
    ModelConfig::new(pump_ratio, couplings)
}

/// Microscopic parameters behind one Stokes coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalCoupling {
    pub g23: f64,
    /// Rabi frequency of the mixing field.
    pub omega_m: f64,
    pub n_atoms: u64,
    /// Δ = ω_m − ω₃₁, same units as `omega_m`.
    pub detuning: f64,
}

impl PhysicalCoupling {
    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::Config("n_atoms must be positive".into()));
        }
        if self.detuning == 0.0 {
            return Err(Error::Domain(
                "zero detuning: coupling k = g·Ω·√N/Δ divides by zero".into(),
            ));
        }
        if ![self.g23, self.omega_m, self.detuning].iter().all(|v| v.is_finite()) {
            return Err(Error::Config("physical coupling parameters must be finite".into()));
        }
        Ok(())
    }

    /// True when `|Ω_m/Δ|` exceeds [`FAR_DETUNING_LIMIT`].
    pub fn detuning_warning(&self) -> bool {
        (self.omega_m / self.detuning).abs() > FAR_DETUNING_LIMIT
    }
}

/// `k = g₂₃ Ω_m √N_a / Δ`.
pub fn coupling_from_physical(p: &PhysicalCoupling) -> Result<f64> {
    p.validate()?;
    Ok(p.g23 * p.omega_m * (p.n_atoms as f64).sqrt() / p.detuning)
}

/// Physical interaction time in seconds for a normalized time `k t`, given a
/// spatial coupling rate in cm⁻¹ (the field propagates at `c`).
pub fn interaction_time_seconds(k_per_cm: f64, normalized_time: f64) -> f64 {
    normalized_time / (k_per_cm.abs() * SPEED_OF_LIGHT_CM_PER_S)
}
