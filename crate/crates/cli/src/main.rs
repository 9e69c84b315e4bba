//! `mp-robust`: matrix profiles, noise injection and robustness reports
//! from the command line.
//!
//! Exit codes: 0 success, 1 internal error, 2 configuration or
//! precondition violation, 3 degenerate data, 4 undefined metric.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mp_robust_core::Error;

mod commands;
mod config;
mod output;

use config::{DatasetKind, Format, NoiseChoice, Placement};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err.root() {
            Error::InvalidArgument(_)
            | Error::NoAdmissibleNeighbor { .. }
            | Error::NoAnomaliesSelected { .. }
            | Error::Parse(_)
            | Error::Io(_)
            | Error::Csv(_) => 2,
            Error::Degenerate(_) => 3,
            Error::MetricUndefined { .. } => 4,
            Error::Json(_) | Error::GridPoint { .. } => 1,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mp-robust", version, about = "Matrix-profile robustness to injected noise")]
struct Cli {
    /// TOML file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for profile computation and grid jobs.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a raw dataset into a generic `timestamp_ms,value` series CSV.
    Ingest(InputArgs),
    /// Compute the matrix profile of a series.
    Mp(MpArgs),
    /// Write a corrupted copy of a series plus its corruption record.
    Noise(NoiseArgs),
    /// Run the noise grid and write reports and tables.
    Robustness(RobustnessArgs),
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    #[arg(long, required = true)]
    input: Vec<PathBuf>,

    #[arg(long, value_enum)]
    kind: Option<DatasetKind>,

    /// Base name for output files (defaults to the input file stem).
    #[arg(long)]
    name: Option<String>,

    #[arg(long)]
    out: Option<PathBuf>,

    /// Keystroke bigram as `first,second`.
    #[arg(long)]
    bigram: Option<String>,

    /// Use the most frequent keystroke bigram.
    #[arg(long)]
    top_bigram: bool,

    /// Drop keystroke gaps longer than this.
    #[arg(long)]
    max_gap_ms: Option<i64>,

    /// Accelerometer resampling interval.
    #[arg(long)]
    interval_ms: Option<i64>,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Subsequence length.
    #[arg(short = 'm', long = "window")]
    window: Option<usize>,

    /// Exclusion-zone half-width (default ceil(m/4)).
    #[arg(long)]
    exclusion: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MpArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    noise: NoiseChoice,
    /// Total copies of each duplicated value.
    #[arg(long)]
    k: Option<usize>,
    /// Irrelevant-feature fraction of the series length.
    #[arg(long)]
    p: Option<f64>,
    /// Share of values selected for duplication.
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    duplicate_placement: Option<Placement>,
}

#[derive(Debug, Args)]
pub struct RobustnessArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Restrict the grid to one noise kind.
    #[arg(long, value_enum)]
    noise: Option<NoiseChoice>,
    /// Duplication factors to run (default 2..=6).
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Irrelevant fractions to run (default 0.01,0.05,0.10,0.25,0.50).
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long, value_enum)]
    duplicate_placement: Option<Placement>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => config::FileConfig::load(path)?,
        None => config::FileConfig::default(),
    };
    if let Some(jobs) = cli.jobs.or(file.jobs) {
        if jobs == 0 {
            return Err(CliError::config("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError {
                code: 1,
                message: format!("cannot start worker pool: {e}"),
            })?;
    }
    match cli.command {
        Command::Ingest(args) => commands::ingest(&args, &file),
        Command::Mp(args) => commands::mp(&args, &file),
        Command::Noise(args) => commands::noise(&args, &file),
        Command::Robustness(args) => commands::robustness(&args, &file),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
