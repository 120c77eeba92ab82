pub mod classic;
pub mod cli;
pub mod embed;
pub mod error;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod suite;

pub use error::{Error, Result};
