//! `mixregime` — experiment runner for the binary mixed-regime process.
//!
//! Subcommands: `filter-trace` (exact posterior along a token string),
//! `sweep` (closed-form tables), `montecarlo` (statistical verification with
//! CSV/JSON-lines/manifest output), `oracle-check` (exhaustive filter vs
//! enumeration comparison), and `replay` (re-run a recorded manifest).
//!
//! Exit codes are a stable contract for CI: 0 when all checks pass, 1 on a
//! check failure or runtime error, 2 on usage errors. Stdout carries the
//! primary CSV when no output path is given; diagnostics go to stderr.

mod experiments;
mod manifest;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "mixregime", version, about = "Mixed-regime process toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the exact regime posterior along a binary token string
    FilterTrace(TraceArgs),
    /// Emit a closed-form sweep table
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Run a Monte Carlo verification experiment
    Montecarlo(McArgs),
    /// Exhaustively compare the filter against the enumeration oracle
    OracleCheck(OracleArgs),
    /// Re-run a recorded manifest; outputs are byte-identical to the original
    Replay(ReplayArgs),
}

#[derive(Args)]
pub struct TraceArgs {
    /// Binary token string, e.g. 0101
    #[arg(long)]
    pub tokens: String,
    /// Regime retention probability, in (1/2, 1)
    #[arg(long, default_value_t = 0.9)]
    pub rho: f64,
    /// Prior that Regime 0 governs the first emission, in [0, 1]
    #[arg(long, default_value_t = 0.5)]
    pub pi_init: f64,
    /// Oracle fidelity, in [1/2, 1] (echoed into the manifest; the trace
    /// itself is text-only)
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum SweepCommand {
    /// Sufficiency gap over a pi0 grid
    Gap(GridArgs),
    /// Structural error over a temperature grid at fixed alpha
    Temperature(TemperatureSweepArgs),
    /// Grounded posterior and odds reversal over a gamma grid at fixed pi0
    Gamma(GammaSweepArgs),
    /// Expected residual mutual information over a gamma grid at fixed pi0
    ResidualMi(GammaSweepArgs),
}

#[derive(Args)]
pub struct TemperatureSweepArgs {
    /// Unscaled alternation probability, in (1/2, 1)
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args)]
pub struct GammaSweepArgs {
    /// Text-only posterior the sweep conditions on
    #[arg(long, default_value_t = 0.9)]
    pub pi0: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args)]
pub struct GridArgs {
    /// Comma-separated grid values (overrides min/max/count)
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Inclusive grid start (used with --max/--count)
    #[arg(long)]
    pub min: Option<f64>,
    /// Inclusive grid end
    #[arg(long)]
    pub max: Option<f64>,
    /// Number of grid points between min and max
    #[arg(long, default_value_t = 101)]
    pub count: usize,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct McArgs {
    /// Experiment: calibration | false-authority | threshold | temperature
    pub experiment: String,
    /// JSON config file with flat keys mirroring these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub pi_init: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub n_trajectories: Option<usize>,
    #[arg(long)]
    pub trajectory_length: Option<usize>,
    #[arg(long)]
    pub master_seed: Option<u64>,
    /// Swept parameter: gamma | temperature
    #[arg(long)]
    pub sweep_param: Option<String>,
    /// Comma-separated sweep values
    #[arg(long, value_delimiter = ',')]
    pub sweep_values: Option<Vec<f64>>,
    /// Predictor to score: marginal | grounded
    #[arg(long)]
    pub predictor: Option<String>,
    /// Acceptance band as a sigma multiple
    #[arg(long)]
    pub sigma_band: Option<f64>,
    /// Rows with fewer conditioned samples are flagged and skipped
    #[arg(long)]
    pub min_bin_samples: Option<u64>,
    /// Output directory for records.csv, records.jsonl, manifest.json
    #[arg(long, default_value = "mc-out")]
    pub out_dir: PathBuf,
    /// Worker threads (0 = all cores); never changes the results
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Args)]
pub struct OracleArgs {
    /// Longest prefix to enumerate (at most 20)
    #[arg(long, default_value_t = 12)]
    pub max_length: usize,
    /// Retention probabilities to test
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.6, 0.75, 0.9, 0.99])]
    pub rhos: Vec<f64>,
    /// Regime priors to test
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.5, 0.9])]
    pub pi_inits: Vec<f64>,
}

#[derive(Args)]
pub struct ReplayArgs {
    /// Manifest written by a previous run
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output file for filter-trace / sweep replays (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output directory for montecarlo replays
    #[arg(long, default_value = "mc-replay")]
    pub out_dir: PathBuf,
}

/// Failures are split by exit code: usage problems (2) versus runtime
/// problems (1). Check failures are not errors; they surface as `Ok(false)`.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Runtime(String),
}

impl From<mixregime::Error> for AppError {
    fn from(e: mixregime::Error) -> Self {
        // core errors reaching the CLI are bad user inputs, not IO faults
        AppError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

pub type AppResult<T> = Result<T, AppError>;

fn run(cli: Cli) -> AppResult<bool> {
    match cli.command {
        Command::FilterTrace(args) => tables::filter_trace(&args),
        Command::Sweep(kind) => tables::sweep(&kind),
        Command::Montecarlo(args) => experiments::montecarlo(&args),
        Command::OracleCheck(args) => experiments::oracle_check(&args),
        Command::Replay(args) => experiments::replay(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
