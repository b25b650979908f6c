pub mod attacks;
pub mod cli;
pub mod error;
pub mod protocol;
pub mod quantum_core;
pub mod rng;
pub mod security_analysis;

pub use error::{Error, Result};
