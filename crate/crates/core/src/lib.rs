pub mod cli;
pub mod criteria;
pub mod error;
pub mod model;
pub mod moments;
pub mod oracle;
pub mod propagator;

pub use error::{Error, Result};
