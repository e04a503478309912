//! `hheat`: simulate rescaled random fields, evaluate their covariances and convergence
//! residuals, and run the acceptance self-test.

mod commands;
mod config;
mod manifest;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure{context}: {source}")]
    Numeric {
        context: String,
        source: hheat::Error,
    },
    #[error("io error: {0}")]
    Io(String),
    #[error("self-test failed: {0}")]
    SelfTest(String),
}

impl CliError {
    /// Attach the query or step that failed.
    pub fn numeric(context: impl Into<String>, source: hheat::Error) -> Self {
        let context = context.into();
        match source {
            hheat::Error::Io(msg) => CliError::Io(msg),
            e if is_config_error(&e) => CliError::Config(format!("{context}: {e}")),
            e => CliError::Numeric {
                context: if context.is_empty() {
                    context
                } else {
                    format!(" at {context}")
                },
                source: e,
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric { .. } | CliError::SelfTest(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

fn is_config_error(e: &hheat::Error) -> bool {
    use hheat::Error::*;
    matches!(
        e,
        Domain(_)
            | RegimeMismatch(_)
            | InvalidSpectrum(_)
            | InvalidEquation(_)
            | InvalidGrid(_)
            | GridMismatch(_)
            | InvalidInterval { .. }
    )
}

impl From<hheat::Error> for CliError {
    fn from(e: hheat::Error) -> Self {
        CliError::numeric("", e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "hheat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides `[mc] seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate an ensemble of field realizations into `field.csv`.
    Simulate(CommonArgs),
    /// Theoretical (and optionally empirical) covariances into `cov_theory.csv`.
    Covariance(CommonArgs),
    /// The residual ladder into `residual.csv`.
    Residual(CommonArgs),
    /// Every CSV the figure renderer reads.
    FiguresData(CommonArgs),
    /// Run the acceptance criteria and report each one.
    Selftest(CommonArgs),
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("HHEAT_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!("HHEAT_THREADS={value:?} is not a positive integer"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Simulate(a) => commands::simulate(&a),
        Command::Covariance(a) => commands::covariance(&a),
        Command::Residual(a) => commands::residual(&a),
        Command::FiguresData(a) => commands::figures_data(&a),
        Command::Selftest(a) => commands::selftest(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hheat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
