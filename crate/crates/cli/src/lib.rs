//! Experiment runner for Müntz corner-cutting: named figure reproductions,
//! JSON-configured runs, and CSV/JSON/SVG artifacts.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod tools;

pub use config::{ExperimentConfig, OutputKind};
pub use error::{CliError, Result};
pub use experiment::{Experiment, Outcome, DEFAULT_POLYGON, FIGURES};
pub use output::write_outputs;
