//! Experiment configuration: a JSON file layered under command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use mub_core::sampling::SampleSpec;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Every setting as an optional value. The same struct is parsed from the
/// config file and from flags; flags win.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    /// Dimension (a supported prime power)
    #[arg(long)]
    pub n: Option<u64>,
    /// Number of bases to use, at most n + 1 [default: n + 1]
    #[arg(long)]
    pub m: Option<usize>,
    /// Aspect ratio y = p / n in (0, 1) [default: 0.5]
    #[arg(long)]
    pub y: Option<f64>,
    /// Monte-Carlo trials [default: 100]
    #[arg(long)]
    pub trials: Option<usize>,
    /// Base seed; trial t uses a substream derived from (seed, t) [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Highest moment order [default: 4]
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Histogram bins or table points [default: 40]
    #[arg(long)]
    pub bins: Option<usize>,
    /// Output directory [default: out]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Read the family from a basis file instead of constructing it
    #[arg(long)]
    pub basis: Option<PathBuf>,
    /// Comma-separated dimensions for the variance sweep [default: n]
    #[arg(long, value_delimiter = ',')]
    pub sweep: Option<Vec<u64>>,
    /// Path length for the path report [default: 4]
    #[arg(long)]
    pub length: Option<usize>,
    /// Fail the ESD run when the KS distance exceeds this value
    #[arg(long)]
    pub ks_max: Option<f64>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` take precedence over `below`.
    pub fn over(self, below: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            n: self.n.or(below.n),
            m: self.m.or(below.m),
            y: self.y.or(below.y),
            trials: self.trials.or(below.trials),
            seed: self.seed.or(below.seed),
            lmax: self.lmax.or(below.lmax),
            bins: self.bins.or(below.bins),
            out: self.out.or(below.out),
            basis: self.basis.or(below.basis),
            sweep: self.sweep.or(below.sweep),
            length: self.length.or(below.length),
            ks_max: self.ks_max.or(below.ks_max),
        }
    }
}

/// A fully resolved and validated configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: u64,
    /// Basis count; unset means `n + 1` for each dimension.
    pub m: Option<usize>,
    pub y: f64,
    pub trials: usize,
    pub seed: u64,
    pub lmax: usize,
    pub bins: usize,
    pub out: PathBuf,
    pub basis: Option<PathBuf>,
    pub sweep: Vec<u64>,
    pub length: usize,
    pub ks_max: Option<f64>,
}

impl ExperimentConfig {
    /// Fills defaults. `n` comes from the layer, else from `default_n`.
    pub fn resolve(layer: ConfigLayer, default_n: Option<u64>) -> Result<Self> {
        let n = layer
            .n
            .or(default_n)
            .ok_or_else(|| HarnessError::Config("dimension --n is required".into()))?;
        let cfg = ExperimentConfig {
            n,
            m: layer.m,
            y: layer.y.unwrap_or(0.5),
            trials: layer.trials.unwrap_or(100),
            seed: layer.seed.unwrap_or(0),
            lmax: layer.lmax.unwrap_or(4),
            bins: layer.bins.unwrap_or(40),
            out: layer.out.unwrap_or_else(|| PathBuf::from("out")),
            basis: layer.basis,
            sweep: layer.sweep.unwrap_or_else(|| vec![n]),
            length: layer.length.unwrap_or(4),
            ks_max: layer.ks_max,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        for &n in self.sweep.iter().chain([&self.n]) {
            if n < 2 {
                return bad(format!("dimension n = {n} must be at least 2"));
            }
            let m = self.bases_for(n);
            if m == 0 || m as u64 > n + 1 {
                return bad(format!("basis count m = {m} must lie in [1, n + 1 = {}]", n + 1));
            }
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.lmax == 0 {
            return bad("lmax must be positive".into());
        }
        if self.bins == 0 {
            return bad("bins must be positive".into());
        }
        if self.sweep.is_empty() {
            return bad("sweep list is empty".into());
        }
        if !(self.y > 0.0 && self.y < 1.0) {
            return bad(format!("ratio y = {} must lie in (0, 1)", self.y));
        }
        Ok(())
    }

    pub fn bases_for(&self, n: u64) -> usize {
        self.m.unwrap_or(n as usize + 1)
    }

    /// Sampling shape for dimension `n` with this config's ratio and seed.
    pub fn sample_spec(&self, n: u64) -> Result<SampleSpec> {
        Ok(SampleSpec::from_ratio(n as usize, self.bases_for(n), self.y, self.seed, self.trials)?)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut dims = self.sweep.clone();
        dims.push(self.n);
        dims.sort_unstable();
        dims.dedup();
        dims.into_iter()
            .filter(|&n| (self.bases_for(n) as f64) < (n as f64).sqrt())
            .map(|n| {
                format!(
                    "n = {n}, m = {} < sqrt(n): outside the regime where convergence to the MP law is guaranteed",
                    self.bases_for(n)
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file: ConfigLayer = serde_json::from_str(r#"{"n": 13, "y": 0.25, "trials": 7, "sweep": [3, 5]}"#).unwrap();
        let flags = ConfigLayer { y: Some(0.5), ..Default::default() };
        let cfg = ExperimentConfig::resolve(flags.over(file), None).unwrap();
        assert_eq!((cfg.n, cfg.bases_for(13), cfg.y, cfg.trials), (13, 14, 0.5, 7));
        assert_eq!(cfg.bases_for(61), 62);
        assert_eq!(cfg.sweep, vec![3, 5]);
        assert_eq!(cfg.sample_spec(13).unwrap().p, 6);
    }

    #[test]
    fn rejects_bad_values() {
        let resolve = |layer: ConfigLayer| ExperimentConfig::resolve(layer, Some(5));
        assert!(resolve(ConfigLayer { m: Some(7), ..Default::default() }).is_err());
        assert!(resolve(ConfigLayer { m: Some(5), sweep: Some(vec![3, 5]), ..Default::default() }).is_err());
        assert!(resolve(ConfigLayer { trials: Some(0), ..Default::default() }).is_err());
        assert!(resolve(ConfigLayer { y: Some(1.0), ..Default::default() }).is_err());
        assert!(ExperimentConfig::resolve(ConfigLayer::default(), None).is_err());
        assert!(serde_json::from_str::<ConfigLayer>(r#"{"dimension": 3}"#).is_err());
    }

    #[test]
    fn few_bases_warns() {
        let cfg = ExperimentConfig::resolve(ConfigLayer { m: Some(3), ..Default::default() }, Some(25)).unwrap();
        assert_eq!(cfg.warnings().len(), 1);
        let cfg = ExperimentConfig::resolve(ConfigLayer::default(), Some(25)).unwrap();
        assert!(cfg.warnings().is_empty());
    }
}
