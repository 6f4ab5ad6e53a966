//! Command-line front end: load an economy config, run the solvers and
//! oracles, and emit the figures' underlying data as CSV/JSON.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "infomenu",
    version,
    about = "Revenue-maximizing menus of information products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured economy and write the menu artifact.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Output path: JSON for two-type menus and posted prices, CSV plus
        /// a sibling JSON header for continuum schedules.
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify the optimal regime over a payoff-ratio / switching-mass grid.
    RegionMap {
        #[arg(long)]
        config: PathBuf,
        /// Cell CSV path; boundary curves land next to it as `<stem>.boundary.csv`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Audit a previously solved menu against its economy.
    Verify {
        /// Menu artifact produced by `solve`.
        menu: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Where to write the verification report (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Audit tolerance; overrides the config's `tolerance` field.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Seed for the Monte Carlo spot checks.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte Carlo estimate of a buyer's value of an experiment.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Failures mapped to process exit codes: verification findings exit 1,
/// config or artifact problems exit 2, numeric failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Violations(String),
    Parse(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Violations(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { config, out } => commands::solve(&config, &out),
        Command::RegionMap { config, out } => commands::region_map(&config, &out),
        Command::Verify {
            menu,
            config,
            out,
            tolerance,
            seed,
        } => commands::verify(&menu, &config, out.as_deref(), tolerance, seed),
        Command::Simulate { config, out, seed } => {
            commands::simulate(&config, out.as_deref(), seed)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let label = match &err {
                CliError::Violations(_) => "verification failed",
                CliError::Parse(_) => "config error",
                CliError::Numeric(_) => "numeric failure",
            };
            let (CliError::Violations(msg) | CliError::Parse(msg) | CliError::Numeric(msg)) = &err;
            eprintln!("{label}: {msg}");
            ExitCode::from(err.code())
        }
    }
}
