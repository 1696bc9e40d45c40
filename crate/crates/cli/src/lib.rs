//! Command-line front end for strainlab.
//!
//! Exit codes: 0 success, 1 malformed flags or input, 2 some `compute`
//! record failed, 3 some `verify` check failed.

// `!(x > y)` forms are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compute;
pub mod demo;
pub mod io;
pub mod verify;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use strainlab::{IsotropicMetric, StrainKind};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_RECORD_ERROR: u8 = 2;
pub const EXIT_CHECK_FAILED: u8 = 3;

/// Default seed of the verification suites; `STRAINLAB_SEED` overrides it.
pub const DEFAULT_SEED: u64 = 20_160_607;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "strainlab", version, about = "Strain measures: distances from GL(n)+ to SO(n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a strain measure for every matrix in the input files.
    Compute(compute::ComputeArgs),
    /// Run the built-in property suites.
    Verify(verify::VerifyArgs),
    /// Emit demonstration tables as CSV.
    Demo(demo::DemoArgs),
}

/// (α, β, γ) of the isotropic inner product.
#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
}

impl MetricArgs {
    /// The metric when all three parameters are given; an error when only
    /// some are, or when `kind` needs one and none is given.
    pub fn resolve(&self, kind: Option<StrainKind>) -> Result<Option<IsotropicMetric>, CliError> {
        match (self.alpha, self.beta, self.gamma) {
            (Some(a), Some(b), Some(g)) => IsotropicMetric::new(a, b, g)
                .map(Some)
                .map_err(|e| CliError::Usage(e.to_string())),
            (None, None, None) => match kind {
                Some(k) if k.needs_metric() => Err(CliError::Usage(format!(
                    "--measure {k} requires --alpha, --beta and --gamma"
                ))),
                _ => Ok(None),
            },
            _ => Err(CliError::Usage(
                "--alpha, --beta and --gamma must be given together".into(),
            )),
        }
    }

    pub fn require(&self) -> Result<IsotropicMetric, CliError> {
        self.resolve(None)?
            .ok_or_else(|| CliError::Usage("--alpha, --beta and --gamma are required".into()))
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Compute(a) => compute::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Demo(a) => demo::run(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
