//! Run reports, pass/fail checks and file output.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, pass: value <= threshold }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub l: usize,
    pub empirical: f64,
    pub mp: f64,
    pub abs_error: f64,
    pub std_error: f64,
    pub exact: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceRow {
    pub n: u64,
    pub m: usize,
    pub p: usize,
    pub l: usize,
    pub mean: f64,
    pub variance: f64,
    pub exact: Option<f64>,
}

/// Everything a run produced except timing, so equal inputs give equal files.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: ExperimentConfig,
    pub p: usize,
    pub warnings: Vec<String>,
    pub trial_seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub moments: Vec<MomentRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variances: Vec<VarianceRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: &str, config: &ExperimentConfig, p: usize, trial_seeds: Vec<u64>) -> Self {
        RunReport {
            command: command.to_string(),
            config: config.clone(),
            p,
            warnings: config.warnings(),
            trial_seeds,
            moments: Vec::new(),
            variances: Vec::new(),
            ks: None,
            checks: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))
}

/// Writes a CSV with a header row; every record has the header's width.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// What a command reports back to the CLI.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}
