//! `quasirect` command-line driver.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Format, RunConfig};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_TRUNCATION: u8 = 3;
pub const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "quasirect", version, about = "Squeezed-state superpositions built by conditional spin measurements")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Squeeze parameter r (comma-separated list for `sweep`).
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    r: Vec<f64>,

    /// Literal pulse-area base tau.
    #[arg(long, global = true, conflicts_with = "tau_tag", allow_negative_numbers = true)]
    tau: Option<f64>,

    /// Tau convention: "4*exp(-r)", "exp(-r)/2" or a number (comma-separated for `sweep`).
    #[arg(long, global = true, value_delimiter = ',')]
    tau_tag: Vec<String>,

    /// Number of pulses P (areas tau, 2 tau, ..., 2^(P-1) tau).
    #[arg(long, global = true)]
    pulses: Option<usize>,

    /// Fock truncation dimension for the oracle.
    #[arg(long, global = true)]
    dim: Option<usize>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Probability fraction held by the plateau window.
    #[arg(long, global = true, allow_negative_numbers = true)]
    coverage: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the state and write its components and success probability.
    Simulate,
    /// Position density on a grid plus a flatness report.
    Density,
    /// Husimi Q function on a phase-space grid.
    Husimi,
    /// Cross-check the closed form against the Fock oracle.
    Verify {
        /// Also write the oracle's final Fock vector to `oracle_state.txt`.
        #[arg(long)]
        dump_fock: bool,
    },
    /// Flatness reports over lists of r and tau conventions.
    Sweep,
}

/// Failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }
}

impl From<quasirect::Error> for Failure {
    fn from(e: quasirect::Error) -> Self {
        let code = match e {
            quasirect::Error::TruncationTooSmall { .. } => EXIT_TRUNCATION,
            _ => EXIT_CONFIG,
        };
        Self { code, message: e.to_string() }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(cli, matches!(cli.command, Command::Sweep)).map_err(Failure::config)?;
    match cli.command {
        Command::Simulate => commands::simulate(&cfg),
        Command::Density => commands::density(&cfg),
        Command::Husimi => commands::husimi(&cfg),
        Command::Verify { dump_fock } => commands::verify(&cfg, dump_fock),
        Command::Sweep => commands::sweep(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
