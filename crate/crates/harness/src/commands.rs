//! One function per CLI subcommand. Each writes its files under the output
//! directory and returns what to print.

use std::path::{Path, PathBuf};

use mub_core::mub::{coherence, construct_complete_mubs, verify_unbiased, MubFamily};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::experiment::{esd_run, load_family, moments_run, variance_run};
use crate::mp_table::mp_table;
use crate::paths_report::{path_report, PathRow};
use crate::report::{ensure_dir, fmt_float, fmt_opt, write_csv, write_json, Check, Outcome, RunReport};

/// Tolerance for unbiasedness checks.
pub const VERIFY_TOL: f64 = 1e-10;

/// Dimension stored in a basis file.
pub fn basis_dimension(path: &Path) -> Result<u64> {
    let fam = MubFamily::read_json(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(fam.dimension() as u64)
}

fn check_lines(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .map(|c| {
            let verdict = if c.pass { "ok" } else { "FAIL" };
            format!("check {:<28} {verdict:<4} value {:.6e} threshold {:.6e}", c.name, c.value, c.threshold)
        })
        .collect()
}

fn finish(report: &RunReport, mut lines: Vec<String>, files: Vec<PathBuf>) -> Outcome {
    lines.extend(report.warnings.iter().map(|w| format!("warning: {w}")));
    lines.extend(check_lines(&report.checks));
    Outcome { pass: report.pass, lines, files }
}

fn unbiasedness_lines(fam: &MubFamily) -> (bool, Vec<String>) {
    let r = verify_unbiased(fam, VERIFY_TOL);
    let lines = vec![
        format!("n = {}, m = {}", fam.dimension(), fam.basis_count()),
        format!("within-basis defect {:.3e}", r.within_defect),
        format!("cross-basis defect  {:.3e}", r.cross_defect),
        format!("coherence           {:.16}", coherence(fam)),
        format!("unbiased: {}", if r.pass { "pass" } else { "FAIL" }),
    ];
    (r.pass, lines)
}

pub fn gen(cfg: &ExperimentConfig) -> Result<Outcome> {
    let fam = construct_complete_mubs(cfg.n)?.truncated(cfg.bases_for(cfg.n))?;
    let (pass, lines) = unbiasedness_lines(&fam);
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join(format!("basis_n{}.json", cfg.n));
    fam.write_json(&path).map_err(|e| HarnessError::io(&path, e))?;
    Ok(Outcome { pass, lines, files: vec![path] })
}

pub fn verify(cfg: &ExperimentConfig) -> Result<Outcome> {
    let fam = load_family(cfg, cfg.n)?;
    let (pass, lines) = unbiasedness_lines(&fam);
    Ok(Outcome { pass, lines, files: Vec::new() })
}

pub fn esd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let run = esd_run(cfg)?;
    ensure_dir(&cfg.out)?;
    let hist = cfg.out.join("esd_histogram.csv");
    let rows: Vec<Vec<String>> = run
        .histogram
        .iter()
        .map(|b| vec![fmt_float(b.left), fmt_float(b.right), fmt_float(b.empirical_density), fmt_float(b.mp_density)])
        .collect();
    write_csv(&hist, &["bin_left", "bin_right", "empirical_density", "mp_density"], &rows)?;
    let report = cfg.out.join("esd_report.json");
    write_json(&report, &run.report)?;
    let samples = cfg.out.join("esd_samples.json");
    write_json(&samples, &run.samples)?;
    let lines = vec![
        format!("n = {}, m = {}, p = {}, trials = {}", cfg.n, cfg.bases_for(cfg.n), run.report.p, cfg.trials),
        format!("KS distance of the averaged ESD to MP(y = {}): {:.6}", cfg.y, run.report.ks.unwrap_or(f64::NAN)),
    ];
    Ok(finish(&run.report, lines, vec![hist, report, samples]))
}

pub fn moments(cfg: &ExperimentConfig) -> Result<Outcome> {
    let run = moments_run(cfg)?;
    ensure_dir(&cfg.out)?;
    let csv = cfg.out.join("moments.csv");
    let rows: Vec<Vec<String>> = run
        .report
        .moments
        .iter()
        .map(|r| {
            vec![
                r.l.to_string(),
                fmt_float(r.empirical),
                fmt_float(r.mp),
                fmt_float(r.abs_error),
                fmt_float(r.std_error),
                fmt_opt(r.exact),
            ]
        })
        .collect();
    write_csv(&csv, &["l", "empirical", "mp", "abs_error", "std_error", "exact"], &rows)?;
    let report = cfg.out.join("moments_report.json");
    write_json(&report, &run.report)?;
    let samples = cfg.out.join("moments_samples.json");
    write_json(&samples, &run.samples)?;
    let mut lines = vec![format!("n = {}, m = {}, p = {}, trials = {}", cfg.n, cfg.bases_for(cfg.n), run.report.p, cfg.trials)];
    for r in &run.report.moments {
        lines.push(format!(
            "l = {}: empirical {:.6} +- {:.2e}, MP {:.6}, |error| {:.3e}{}",
            r.l,
            r.empirical,
            r.std_error,
            r.mp,
            r.abs_error,
            r.exact.map(|e| format!(", exact {e:.6}")).unwrap_or_default()
        ));
    }
    Ok(finish(&run.report, lines, vec![csv, report, samples]))
}

pub fn variance(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (report, samples) = variance_run(cfg)?;
    ensure_dir(&cfg.out)?;
    let csv = cfg.out.join("variance.csv");
    let rows: Vec<Vec<String>> = report
        .variances
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.m.to_string(),
                r.p.to_string(),
                r.l.to_string(),
                cfg.trials.to_string(),
                fmt_float(r.mean),
                fmt_float(r.variance),
                fmt_opt(r.exact),
            ]
        })
        .collect();
    write_csv(&csv, &["n", "m", "p", "l", "trials", "mean", "variance", "exact"], &rows)?;
    let report_path = cfg.out.join("variance_report.json");
    write_json(&report_path, &report)?;
    let mut files = vec![csv, report_path];
    for s in &samples {
        let path = cfg.out.join(format!("variance_samples_n{}.json", s.n));
        write_json(&path, s)?;
        files.push(path);
    }
    let lines = report
        .variances
        .iter()
        .map(|r| {
            format!(
                "n = {:>4}, p = {:>3}, l = {}: variance {:.6e}{}",
                r.n,
                r.p,
                r.l,
                r.variance,
                r.exact.map(|e| format!(", exact {e:.6e}")).unwrap_or_default()
            )
        })
        .collect();
    Ok(finish(&report, lines, files))
}

pub fn paths(cfg: &ExperimentConfig) -> Result<Outcome> {
    let fam = load_family(cfg, cfg.n)?;
    let report = path_report(cfg.length, &fam)?;
    ensure_dir(&cfg.out)?;
    let csv = cfg.out.join(format!("paths_l{}.csv", cfg.length));
    let rows: Vec<Vec<String>> = report.rows.iter().map(PathRow::record).collect();
    write_csv(&csv, &PathRow::HEADER, &rows)?;
    let members = report.rows.iter().filter(|r| r.in_gamma).count();
    let mut lines = vec![format!(
        "l = {}: {} canonical paths, {} double trees (n = {}, m = {})",
        cfg.length,
        report.rows.len(),
        members,
        fam.dimension(),
        fam.basis_count()
    )];
    if let Some(k) = report.observed_constant {
        lines.push(format!("largest observed non-member constant K = {k:.6}"));
    }
    lines.extend(check_lines(&report.checks));
    Ok(Outcome { pass: report.checks.iter().all(|c| c.pass), lines, files: vec![csv] })
}

pub fn mp(cfg: &ExperimentConfig) -> Result<Outcome> {
    let table = mp_table(cfg.y, cfg.bins, cfg.lmax)?;
    ensure_dir(&cfg.out)?;
    let density = cfg.out.join("mp_density.csv");
    let rows: Vec<Vec<String>> = table.density.iter().map(|r| r.iter().map(|&x| fmt_float(x)).collect()).collect();
    write_csv(&density, &["x", "pdf", "cdf"], &rows)?;
    let moments = cfg.out.join("mp_moments.csv");
    let rows: Vec<Vec<String>> = table
        .moments
        .iter()
        .map(|&(l, f, q, e)| vec![l.to_string(), fmt_float(f), fmt_float(q), fmt_float(e)])
        .collect();
    write_csv(&moments, &["l", "formula", "quadrature", "abs_error"], &rows)?;
    let mut lines: Vec<String> =
        table.moments.iter().map(|&(l, f, _, e)| format!("l = {l}: moment {f:.12}, quadrature error {e:.2e}")).collect();
    lines.extend(check_lines(&table.checks));
    Ok(Outcome { pass: table.checks.iter().all(|c| c.pass), lines, files: vec![density, moments] })
}
