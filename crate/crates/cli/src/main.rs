//! Command-line front end for the ensemble bound library: closed-form
//! bound evaluation, telescoping-schedule optimization, exact k-NN
//! holdout validation, Monte Carlo coverage experiments, and plot-ready
//! parameter sweeps.
//!
//! Exit statuses: 0 success, 2 usage error, 3 precondition violation,
//! 4 oracle mismatch (in `--oracle` / `--brute-force-check` modes),
//! 5 coverage failure (`simulate` saw a violation frequency above delta).

mod commands;
mod output;
mod spec;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ensemble_bounds::bounds::BoundError;
use ensemble_bounds::knn::KnnError;
use ensemble_bounds::simulate::SimError;
use ensemble_bounds::telescope::OptimizeError;

use output::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Precondition(String),
    OracleMismatch { message: String, output: String },
    CoverageFailure { message: String, output: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::OracleMismatch { .. } => 4,
            CliError::CoverageFailure { .. } => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(message) | CliError::Precondition(message) => message,
            CliError::OracleMismatch { message, .. } => message,
            CliError::CoverageFailure { message, .. } => message,
        }
    }

    /// Results already computed when the failure was detected; printed to
    /// stdout before exiting nonzero.
    pub fn stdout_payload(&self) -> Option<&str> {
        match self {
            CliError::OracleMismatch { output, .. } => Some(output),
            CliError::CoverageFailure { output, .. } => Some(output),
            _ => None,
        }
    }
}

impl From<BoundError> for CliError {
    fn from(error: BoundError) -> Self {
        CliError::Precondition(error.to_string())
    }
}

impl From<OptimizeError> for CliError {
    fn from(error: OptimizeError) -> Self {
        CliError::Precondition(error.to_string())
    }
}

impl From<KnnError> for CliError {
    fn from(error: KnnError) -> Self {
        CliError::Precondition(error.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(error: SimError) -> Self {
        CliError::Precondition(error.to_string())
    }
}

/// Bound families selectable from the command line. Flag naming mirrors
/// the usual symbols (m, n, s, delta, j, c) for traceability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    /// Per-classifier uniform bound.
    Uniform,
    /// Per-classifier bound allowing j misvalidations (--j, fractional ok).
    NearlyUniform,
    /// Ensemble-average bound from the uniform bound.
    EnsembleUniform,
    /// Ensemble-average bound allowing j misvalidations a priori.
    EnsembleNearlyUniform,
    /// Observed-rate form; reads the ensemble's rates from --rates.
    Observed,
    /// Telescoping chain over an explicit schedule.
    Telescoping,
    /// Closed-form geometric schedule (--c).
    ClosedForm,
    /// Analytic envelope of the closed form (--c).
    Analytic,
    /// A base bound plus a disagreement rate (--base-kind, --disagreement-rate).
    FullClassifier,
}

#[derive(Parser)]
#[command(
    name = "ensemble-bounds",
    version,
    about = "Out-of-sample error bounds for equally weighted Gibbs ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one bound from flags.
    Bound(BoundArgs),
    /// Optimize a telescoping schedule by dynamic programming.
    Optimize(OptimizeArgs),
    /// Exact average holdout error of the k-NN Gibbs classifier.
    KnnGibbs(KnnArgs),
    /// Run a Monte Carlo bound-coverage experiment.
    Simulate(SimulateArgs),
    /// Emit (parameter, epsilon) rows for the selectivity/variety trade-off.
    Sweep(SweepArgs),
}

#[derive(Debug, clap::Args)]
struct BoundArgs {
    /// Bound family to evaluate.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Hypothesis class size.
    #[arg(long)]
    m: Option<u64>,
    /// Validation examples per classifier.
    #[arg(long)]
    n: Option<u64>,
    /// Confidence budget in (0, 1].
    #[arg(long)]
    delta: Option<f64>,
    /// Ensemble size.
    #[arg(long)]
    s: Option<u64>,
    /// Allowed misvalidations.
    #[arg(long)]
    j: Option<f64>,
    /// Decay rate of the geometric schedule.
    #[arg(long)]
    c: Option<f64>,
    /// Telescoping j values, comma separated.
    #[arg(long, value_delimiter = ',')]
    schedule_j: Option<Vec<f64>>,
    /// Telescoping delta values, comma separated (one more than j values).
    #[arg(long, value_delimiter = ',')]
    schedule_delta: Option<Vec<f64>>,
    /// File of observed validation rates (whitespace separated).
    #[arg(long)]
    rates: Option<PathBuf>,
    /// Disagreement rate for --kind full-classifier.
    #[arg(long)]
    disagreement_rate: Option<f64>,
    /// Base bound for --kind full-classifier.
    #[arg(long, value_enum)]
    base_kind: Option<KindArg>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Debug, clap::Args)]
struct OptimizeArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    s: u64,
    #[arg(long)]
    delta: f64,
    /// Telescoping stage count.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Spacing of candidate delta values.
    #[arg(long, default_value_t = 1e-4)]
    delta_increment: f64,
    /// Candidate j values: `integers`, `geometric:<c>`, or `list:<v,v,...>`.
    #[arg(long, default_value = "integers")]
    j_grid: String,
    /// Cross-check the optimum against exhaustive enumeration.
    #[arg(long)]
    brute_force_check: bool,
    /// Work cap for the table and the enumeration.
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Debug, clap::Args)]
struct KnnArgs {
    /// Dataset file: feature columns then a label column.
    #[arg(long)]
    data: PathBuf,
    /// Holdout examples per split.
    #[arg(long)]
    n_holdout: usize,
    /// Neighbors voting (odd).
    #[arg(long)]
    k: usize,
    /// Cross-check against split enumeration.
    #[arg(long)]
    oracle: bool,
    /// Skip the first row.
    #[arg(long)]
    header: bool,
    /// Field delimiter.
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Split cap for the oracle.
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Debug, clap::Args)]
struct SimulateArgs {
    /// key = value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// `lowest`, `random`, or `threshold:<tau>`.
    #[arg(long)]
    rule: Option<String>,
    /// `uniform:lo,hi`, `two-point:pl,ph,frac`, or `fixed:<path>`.
    #[arg(long)]
    dist: Option<String>,
    /// Comma-separated bounds under test.
    #[arg(long)]
    bounds: Option<String>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Debug, clap::Args)]
struct SweepArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    c: f64,
    /// Hypothesis class sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u64>,
    /// Fixed m/s ratio: each row selects s = m / ratio.
    #[arg(long)]
    ratio: Option<f64>,
    /// Ensemble sizes, comma separated (requires a single --m).
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Bound(args) => commands::bound(args),
        Command::Optimize(args) => commands::optimize(args),
        Command::KnnGibbs(args) => commands::knn_gibbs(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::Sweep(args) => commands::sweep(args),
    };
    match outcome {
        Ok(text) => print!("{text}"),
        Err(error) => {
            if let Some(payload) = error.stdout_payload() {
                print!("{payload}");
            }
            eprintln!("error: {}", error.message());
            std::process::exit(error.exit_code());
        }
    }
}
