use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use mub_harness::commands::{self, basis_dimension};
use mub_harness::{ConfigLayer, ExperimentConfig, Result};

/// Mutually unbiased bases, random Gram matrices and the Marchenko-Pastur law.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
/// or input errors.
#[derive(Parser)]
#[command(name = "mubrmt", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a complete family, verify it and write the basis file
    Gen(Opts),
    /// Check unbiasedness of a basis file or a constructed family
    Verify(Opts),
    /// Averaged empirical spectral distribution against the MP law
    Esd(Opts),
    /// Monte-Carlo trace moments against MP moments and exact expectations
    Moments(Opts),
    /// Enumerate closed paths of one length with reduction and exact weights
    Paths(Opts),
    /// Variance of trace moments across a sweep of dimensions
    Variance(Opts),
    /// Tabulate the MP density and check its moments by quadrature
    Mp(Opts),
}

#[derive(clap::Args)]
struct Opts {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    layer: ConfigLayer,
}

impl Opts {
    fn resolve(self, default_n: Option<u64>) -> Result<ExperimentConfig> {
        let layer = match &self.config {
            Some(path) => self.layer.over(ConfigLayer::from_file(path)?),
            None => self.layer,
        };
        let from_file = match (&layer.n, &layer.basis) {
            (None, Some(path)) => Some(basis_dimension(path)?),
            _ => None,
        };
        ExperimentConfig::resolve(layer, from_file.or(default_n))
    }
}

fn run(cli: Cli) -> Result<bool> {
    let outcome = match cli.command {
        Command::Gen(o) => commands::gen(&o.resolve(None)?)?,
        Command::Verify(o) => commands::verify(&o.resolve(None)?)?,
        Command::Esd(o) => commands::esd(&o.resolve(None)?)?,
        Command::Moments(o) => commands::moments(&o.resolve(None)?)?,
        Command::Paths(o) => commands::paths(&o.resolve(Some(3))?)?,
        Command::Variance(o) => commands::variance(&o.resolve(None)?)?,
        Command::Mp(o) => commands::mp(&o.resolve(Some(2))?)?,
    };
    for line in &outcome.lines {
        println!("{line}");
    }
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(cli);
    println!("wall-clock {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
