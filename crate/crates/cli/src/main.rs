//! `brw`: simulations, closed-form bounds, verifiers and experiment presets for branching
//! random walks on hypercubes.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage error, 3 guard violation.

mod bounds;
mod error;
mod experiment;
mod output;
mod simulate;
mod verify;

use clap::{Parser, Subcommand};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "brw", version, about = "Branching random walks on binary strings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run replicas and write a trajectory or an aggregate.
    Simulate(simulate::SimulateArgs),
    /// Spectral and coverage constants for mixture kernels, as CSV.
    Bounds(bounds::BoundsArgs),
    /// Check closed forms against brute-force oracles.
    Verify(verify::VerifyArgs),
    /// Regenerate a figure or table as data files.
    Experiment(experiment::ExperimentArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result: Result<(), CliError> = match &cli.command {
        Command::Simulate(a) => simulate::simulate(a),
        Command::Bounds(a) => bounds::bounds(a),
        Command::Verify(a) => verify::verify(a),
        Command::Experiment(a) => experiment::experiment(a),
    };
    if let Err(e) = result {
        eprintln!("brw: {e}");
        std::process::exit(e.exit_code());
    }
}
