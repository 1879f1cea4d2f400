//! Command-line driver: `count`, `optimize`, `verify` and `experiment`.
//!
//! Exit codes: 0 success, 1 numerical or verification failure, 2 usage or parse error.
//! Records go to standard output as line-delimited JSON; diagnostics go to standard error.

pub mod commands;
pub mod report;
pub mod state_file;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl From<qae_core::Error> for CliError {
    fn from(e: qae_core::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qae",
    version,
    about = "Optimal encoders for quantum-autoencoder compression"
)]
pub struct Cli {
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,

    /// Largest tableau count searched exhaustively.
    #[arg(long, global = true, value_parser = parse_biguint, default_value = "10000000")]
    pub threshold: BigUint,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the exact number of regular tableaux of a d_A x d_B grid.
    Count { d_a: usize, d_b: usize },
    /// Find the encoder minimizing the lost information for a state file.
    Optimize {
        state_file: std::path::PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check the compression identity for a dense state under a random regular encoder.
    Verify {
        state_file: std::path::PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip encoding entirely (U = identity).
        #[arg(long)]
        identity: bool,
    },
    /// Reproduce the random-state benchmark of the search algorithm.
    Experiment {
        kind: ExperimentKind,
        #[arg(long, default_value_t = 100)]
        states: usize,
        #[arg(long = "d-a", default_value_t = 8)]
        d_a: usize,
        #[arg(long = "d-b", default_value_t = 8)]
        d_b: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Breadth-first samples.
    #[arg(long, default_value_t = 20_000)]
    pub n1: usize,
    /// Seeds kept for the depth-first phase.
    #[arg(long, default_value_t = 12)]
    pub n2: usize,
    /// Depth-first iterations per seed.
    #[arg(long, default_value_t = 200)]
    pub nd: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    /// Random diagonal mixed states.
    Fig2a,
    /// Random product spectra (optimum is zero).
    Fig2b,
}

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    let v: BigUint = s
        .parse()
        .map_err(|_| format!("expected a nonnegative integer, got {s:?}"))?;
    if v < BigUint::from(1u32) {
        return Err("threshold must be at least 1".into());
    }
    Ok(v)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
