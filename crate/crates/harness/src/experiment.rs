//! Monte-Carlo runs: ESD against the MP law, moment bias and variance sweeps.

use mub_core::mub::{construct_complete_mubs, MubFamily, PoolIndex};
use mub_core::paths::{expectation_exact, variance_exact};
use mub_core::rng::substream_seed;
use mub_core::sampling::{draw_trial, gram, trace_moment, GramMatrix, SampleMetadata, SampleSpec};
use mub_core::spectra::{eigenvalues_hermitian, ks_distance, mp_cdf, mp_moment, Esd, MpParams, Spectrum};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::report::{Check, MomentRow, RunReport, VarianceRow};

/// Residual tolerance handed to the eigensolver.
pub const EIGEN_TOL: f64 = 1e-9;
/// Largest path length for which the exact expectation column is filled.
const EXACT_MOMENT_MAX_LEN: usize = 6;
/// Skip exact columns whose brute force would exceed these many assignments.
const EXACT_COST_CAP: f64 = 1e7;
const EXACT_VARIANCE_CAP: f64 = 1e6;

/// The family for dimension `n`: read from the basis file when it matches,
/// otherwise constructed. Truncated to the configured basis count.
pub fn load_family(cfg: &ExperimentConfig, n: u64) -> Result<MubFamily> {
    let full = match &cfg.basis {
        Some(path) => {
            let fam = MubFamily::read_json(path).map_err(|e| HarnessError::io(path, e))?;
            if fam.dimension() as u64 != n {
                return Err(HarnessError::Config(format!(
                    "basis file {} has n = {}, expected {n}",
                    path.display(),
                    fam.dimension()
                )));
            }
            fam
        }
        None => construct_complete_mubs(n)?,
    };
    let m = cfg.bases_for(n);
    if m > full.basis_count() {
        return Err(HarnessError::Config(format!("m = {m} but only {} bases available", full.basis_count())));
    }
    Ok(full.truncated(m)?)
}

/// Runs `f` on the Gram matrix of every trial in parallel. Results come back
/// in trial order with the provenance of each sample.
pub fn run_trials<T, F>(fam: &MubFamily, shape: &SampleSpec, f: F) -> Result<Vec<(T, Vec<PoolIndex>)>>
where
    T: Send,
    F: Fn(&GramMatrix) -> Result<T> + Sync,
{
    (0..shape.trials as u64)
        .into_par_iter()
        .map(|t| {
            let sample = draw_trial(fam, shape.p, shape.seed, t)?;
            let out = f(&gram(&sample))?;
            Ok((out, sample.provenance().to_vec()))
        })
        .collect()
}

pub fn trial_seeds(shape: &SampleSpec) -> Vec<u64> {
    (0..shape.trials as u64).map(|t| substream_seed(shape.seed, t)).collect()
}

fn metadata(shape: &SampleSpec, provenance: Vec<Vec<PoolIndex>>) -> SampleMetadata {
    SampleMetadata {
        seed: shape.seed,
        n: shape.n,
        m: shape.m,
        p: shape.p,
        y: shape.y,
        trial_seeds: trial_seeds(shape),
        provenance,
    }
}

/// Recomputes the spectrum of a single trial.
pub fn replay_trial(cfg: &ExperimentConfig, trial: u64) -> Result<Spectrum> {
    let fam = load_family(cfg, cfg.n)?;
    let shape = cfg.sample_spec(cfg.n)?;
    let sample = draw_trial(&fam, shape.p, shape.seed, trial)?;
    Ok(eigenvalues_hermitian(&gram(&sample), EIGEN_TOL)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub empirical_density: f64,
    /// MP mass of the bin divided by its width.
    pub mp_density: f64,
}

/// Equal-width bins over `[0, b + 0.5]`. Eigenvalues within 1e-8 below zero
/// count in the first bin.
pub fn histogram(esd: &Esd, mp: &MpParams, bins: usize) -> Vec<HistogramBin> {
    let hi = mp.b() + 0.5;
    let width = hi / bins as f64;
    let total = esd.values().len().max(1) as f64;
    let mut counts = vec![0usize; bins];
    for &x in esd.values() {
        if (-1e-8..hi).contains(&x) {
            counts[((x.max(0.0) / width) as usize).min(bins - 1)] += 1;
        }
    }
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let left = k as f64 * width;
            let right = if k + 1 == bins { hi } else { (k + 1) as f64 * width };
            HistogramBin {
                left,
                right,
                empirical_density: c as f64 / (total * (right - left)),
                mp_density: (mp_cdf(mp, right) - mp_cdf(mp, left)) / (right - left),
            }
        })
        .collect()
}

pub struct EsdRun {
    pub report: RunReport,
    pub spectra: Vec<Spectrum>,
    pub histogram: Vec<HistogramBin>,
    pub samples: SampleMetadata,
}

pub fn esd_run(cfg: &ExperimentConfig) -> Result<EsdRun> {
    let fam = load_family(cfg, cfg.n)?;
    let shape = cfg.sample_spec(cfg.n)?;
    let mp = MpParams::new(cfg.y)?;
    let results = run_trials(&fam, &shape, |g| Ok(eigenvalues_hermitian(g, EIGEN_TOL)?))?;
    let (spectra, provenance): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let esd = Esd::averaged(&spectra);
    let ks = ks_distance(&esd, &mp);
    let mut report = RunReport::new("esd", cfg, shape.p, trial_seeds(&shape));
    report.ks = Some(ks);
    let trace_defect = spectra.iter().map(|s| (s.sum() - shape.p as f64).abs()).fold(0.0, f64::max);
    let negativity = spectra.iter().flat_map(|s| s.values().first()).fold(0.0f64, |w, &x| w.max(-x));
    report.push(Check::at_most("eigenvalue_sum_defect", trace_defect, 1e-8));
    report.push(Check::at_most("negative_eigenvalue", negativity, 1e-8));
    if let Some(max) = cfg.ks_max {
        report.push(Check::at_most("ks_distance", ks, max));
    }
    Ok(EsdRun { histogram: histogram(&esd, &mp, cfg.bins), report, spectra, samples: metadata(&shape, provenance) })
}

fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, ss / (n - 1.0))
}

type MomentTable = (Vec<Vec<f64>>, Vec<Vec<PoolIndex>>);

/// `A_1 .. A_lmax` for every trial, as rows of a `trials x lmax` table.
fn trial_moments(fam: &MubFamily, shape: &SampleSpec, lmax: usize) -> Result<MomentTable> {
    let results = run_trials(fam, shape, |g| (1..=lmax).map(|l| Ok(trace_moment(g, l)?)).collect())?;
    Ok(results.into_iter().unzip())
}

fn column(table: &[Vec<f64>], l: usize) -> Vec<f64> {
    table.iter().map(|row| row[l - 1]).collect()
}

fn exact_expectation(l: usize, p: usize, fam: &MubFamily) -> Result<Option<f64>> {
    let cost = (fam.pool_size() as f64).powi(l.min(p) as i32);
    if l > EXACT_MOMENT_MAX_LEN || cost > EXACT_COST_CAP {
        return Ok(None);
    }
    Ok(Some(expectation_exact(l, p, fam)?))
}

fn exact_variance(l: usize, p: usize, fam: &MubFamily) -> Result<Option<f64>> {
    let cost = (fam.pool_size() as f64).powi(p as i32);
    if l > 3 || cost > EXACT_VARIANCE_CAP {
        return Ok(None);
    }
    match variance_exact(l, p, fam) {
        Ok(v) => Ok(Some(v)),
        Err(mub_core::Error::CostGuard { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub struct MomentsRun {
    pub report: RunReport,
    pub samples: SampleMetadata,
}

/// Monte-Carlo `E(A_l)` against the MP moments, with the exact expectation
/// where brute force is affordable.
pub fn moments_run(cfg: &ExperimentConfig) -> Result<MomentsRun> {
    if cfg.lmax > 8 {
        return Err(HarnessError::Config(format!("lmax = {} exceeds 8", cfg.lmax)));
    }
    let fam = load_family(cfg, cfg.n)?;
    let shape = cfg.sample_spec(cfg.n)?;
    let (table, provenance) = trial_moments(&fam, &shape, cfg.lmax)?;
    let mut report = RunReport::new("moments", cfg, shape.p, trial_seeds(&shape));
    let scale = 1.0 / fam.basis_count() as f64 + 1.0 / cfg.n as f64;
    for l in 1..=cfg.lmax {
        let (empirical, var) = mean_and_variance(&column(&table, l));
        let mp = mp_moment(l as u32, cfg.y);
        let row = MomentRow {
            l,
            empirical,
            mp,
            abs_error: (empirical - mp).abs(),
            std_error: (var / cfg.trials as f64).sqrt(),
            exact: exact_expectation(l, shape.p, &fam)?,
        };
        report.push(Check::at_most(format!("bias_l{l}"), row.abs_error, 5.0 * (l * l) as f64 * scale));
        if let Some(exact) = row.exact {
            let spread = (empirical - exact).abs();
            report.push(Check::at_most(format!("exact_agreement_l{l}"), spread, 6.0 * row.std_error + 1e-12));
        }
        report.moments.push(row);
    }
    report.push(Check::at_most("first_moment_defect", (report.moments[0].empirical - 1.0).abs(), 1e-12));
    Ok(MomentsRun { report, samples: metadata(&shape, provenance) })
}

/// Sample variance of `A_l` across trials for every dimension in the sweep.
pub fn variance_run(cfg: &ExperimentConfig) -> Result<(RunReport, Vec<SampleMetadata>)> {
    if cfg.lmax > 8 {
        return Err(HarnessError::Config(format!("lmax = {} exceeds 8", cfg.lmax)));
    }
    let first = cfg.sample_spec(cfg.sweep[0])?;
    let mut report = RunReport::new("variance", cfg, first.p, trial_seeds(&first));
    let mut samples = Vec::new();
    for &n in &cfg.sweep {
        let fam = load_family(cfg, n)?;
        let shape = cfg.sample_spec(n)?;
        let (table, provenance) = trial_moments(&fam, &shape, cfg.lmax)?;
        for l in 1..=cfg.lmax {
            let (mean, variance) = mean_and_variance(&column(&table, l));
            let exact = exact_variance(l, shape.p, &fam)?;
            if l == 1 {
                report.push(Check::at_most(format!("first_moment_variance_n{n}"), variance, 1e-24));
            }
            report.variances.push(VarianceRow { n, m: shape.m, p: shape.p, l, mean, variance, exact });
        }
        samples.push(metadata(&shape, provenance));
    }
    Ok((report, samples))
}
