//! Experiment harness: configuration, Monte-Carlo runs, combinatorial
//! reports and their CSV/JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod mp_table;
pub mod paths_report;
pub mod report;

pub use config::{ConfigLayer, ExperimentConfig};
pub use error::{HarnessError, Result};
