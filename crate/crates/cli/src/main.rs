//! Command-line entry point.
//!
//! Exit codes: 0 success, 2 usage/config error, 3 I/O error, 4 numerical
//! degeneracy.

mod commands;
mod errors;
mod manifest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use errors::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "roomflock",
    version,
    about = "Beacon-driven collective-motion simulator with ABC inference and calibration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every command.
#[derive(Debug, Args)]
struct CommonOpts {
    /// JSON configuration file (a run manifest is also accepted).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Random seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: ROOMFLOCK_WORKERS or all cores). Never
    /// changes output bytes.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override the modulation weight w.
    #[arg(long, global = true)]
    w: Option<f64>,
    /// Override the sensing radius r (meters).
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Override the movement speed v (m/s).
    #[arg(long, global = true)]
    v: Option<f64>,
    /// Override the rotational noise variance eta (rad^2).
    #[arg(long, global = true)]
    eta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum MethodArg {
    Rejection,
    Smc,
    Null,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and write the binary trajectory.
    Simulate {
        #[command(flatten)]
        common: CommonOpts,
        /// Output trajectory path (.swrm).
        #[arg(long)]
        out: PathBuf,
        /// Load beacon positions from a CSV instead of placing them.
        #[arg(long)]
        beacons: Option<PathBuf>,
        /// Also export the trajectory as long-format CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build a reference table of (prior draw, summary, seed) rows.
    Table {
        #[command(flatten)]
        common: CommonOpts,
        /// Number of rows N.
        #[arg(long)]
        rows: usize,
        /// Output table path (.swtb).
        #[arg(long)]
        out: PathBuf,
        /// Load beacon positions from a CSV instead of placing them.
        #[arg(long)]
        beacons: Option<PathBuf>,
    },
    /// Estimate the posterior for one observed trajectory.
    Infer {
        #[command(flatten)]
        common: CommonOpts,
        /// Observed trajectory (.swrm).
        #[arg(long)]
        observation: PathBuf,
        /// Reference table (.swtb); required for rejection, optional seed
        /// population for SMC.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Posterior CSV output path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "rejection")]
        method: MethodArg,
        /// Rejection acceptance fraction.
        #[arg(long, default_value_t = 0.1)]
        accept_fraction: f64,
        /// SMC population size M.
        #[arg(long, default_value_t = 500)]
        population: usize,
        /// SMC generations G.
        #[arg(long, default_value_t = 4)]
        generations: usize,
        /// SMC tolerance quantile q.
        #[arg(long, default_value_t = 0.5)]
        quantile: f64,
    },
    /// Simulation-based calibration of the diagnostics with the null
    /// (prior) estimator.
    Calibrate {
        #[command(flatten)]
        common: CommonOpts,
        /// Reference table (.swtb) providing the prior and setup.
        #[arg(long)]
        table: PathBuf,
        /// Number of test simulations S.
        #[arg(long)]
        cases: usize,
        /// Posterior draws per case.
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        /// Output prefix; writes <prefix>.report.json and <prefix>.coverage.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Parameter-recovery study against a reference table.
    Recover {
        #[command(flatten)]
        common: CommonOpts,
        /// Reference table (.swtb).
        #[arg(long)]
        table: PathBuf,
        /// Number of test simulations S.
        #[arg(long)]
        cases: usize,
        #[arg(long, value_enum, default_value = "smc")]
        method: MethodArg,
        /// Rejection acceptance fraction.
        #[arg(long, default_value_t = 0.1)]
        accept_fraction: f64,
        /// SMC population size M.
        #[arg(long, default_value_t = 500)]
        population: usize,
        /// SMC generations G.
        #[arg(long, default_value_t = 4)]
        generations: usize,
        /// SMC tolerance quantile q.
        #[arg(long, default_value_t = 0.5)]
        quantile: f64,
        /// Posterior draws per case for the null method.
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        /// Output prefix; writes <prefix>.report.json and <prefix>.coverage.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the summary vector of a trajectory file.
    Stats {
        #[command(flatten)]
        common: CommonOpts,
        /// Trajectory file (.swrm).
        #[arg(long)]
        input: PathBuf,
        /// Optional summary CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = commands::dispatch(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
