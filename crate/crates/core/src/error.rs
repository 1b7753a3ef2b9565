use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Pump ratio outside `[0, 1)`: the spin wave cannot be treated as a boson.
    #[error("spin wave not bosonizable / invalid ratio: Ω_p/Ω_c = {0} (must satisfy 0 ≤ r < 1)")]
    InvalidRatio(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The Fock cutoff was too small; `tail` is the population found at the cutoff level.
    #[error("truncation error: cutoff-level population {tail:.3e} exceeds {limit:.1e}")]
    Truncation { tail: f64, limit: f64 },

    #[error("index {index} out of range for {n_stokes} Stokes mode(s)")]
    ModeIndex { index: usize, n_stokes: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
