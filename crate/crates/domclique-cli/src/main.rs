//! `domclique` binary: evaluates the library's closed forms on parameter
//! grids, cross-checks the exhaustive small-n oracles, runs deterministic
//! Monte Carlo sweeps, and emits figure-reproduction data. Standard output
//! carries nothing but CSV; progress and diagnostics go to standard error.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "domclique", version, about = "Dominating-clique phase transition toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate closed-form quantities on a parameter grid
    Analytic(PointArgs),
    /// Compare exhaustive small-n oracles against the closed forms
    Exact(PointArgs),
    /// Monte Carlo estimates at a single parameter point
    Simulate(PointArgs),
    /// Monte Carlo estimates across a parameter grid
    Sweep(PointArgs),
    /// Emit the data behind one of the named reference figures
    Figure(FigureArgs),
}

#[derive(Args)]
struct PointArgs {
    /// Node count
    #[arg(long, group = "nsel")]
    n: Option<u64>,

    /// Node-count range A:B:STEP, inclusive; append :geom to multiply by
    /// STEP instead of adding it
    #[arg(long, group = "nsel", value_name = "A:B:STEP[:geom]")]
    n_range: Option<String>,

    /// Edge probability
    #[arg(long, group = "psel")]
    p: Option<f64>,

    /// Comma-separated edge probabilities
    #[arg(long, group = "psel", value_name = "P,P,...", value_delimiter = ',')]
    p_list: Option<Vec<f64>>,

    /// Clique size
    #[arg(long, group = "rsel")]
    r: Option<u64>,

    /// Clique-size exponent: probes r = rho · log_{1/p} n
    #[arg(long, group = "rsel")]
    rho: Option<f64>,

    /// Probe the critical clique size ln n / ln(1/(1−p))
    #[arg(long, group = "rsel")]
    critical: bool,

    /// Offset for the plus/minus-delta ratio asymptotes
    #[arg(long)]
    delta: Option<f64>,

    /// Offset for the constant-lambda ratio asymptote
    #[arg(long)]
    lambda: Option<f64>,

    /// Trials per grid point
    #[arg(long, default_value_t = 10_000)]
    trials: u64,

    /// Master seed; output is a pure function of the flags and this value
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Write the CSV here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads (default: DOMCLIQUE_WORKERS, else 1)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct FigureArgs {
    /// Which figure to reproduce
    #[arg(value_enum)]
    name: FigureName,

    /// Write the CSV here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureName {
    /// The exponent alpha(p) on a 99-point grid
    Alpha,
    /// Dominating/maximal ratio curves at p = 0.45 for three exponents
    Ratio,
}

/// Failures mapped onto the exit-code contract: 2 for bad parameters, 3 for
/// an oracle disagreeing with its closed form, 4 for over-capacity sizes.
enum CliError {
    Lib(domclique::Error),
    Usage(String),
    OracleMismatch(String),
    Io(std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(domclique::Error::Capacity(_)) => 4,
            CliError::Lib(_) => 2,
            CliError::OracleMismatch(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::OracleMismatch(msg) => write!(f, "oracle mismatch: {msg}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<domclique::Error> for CliError {
    fn from(e: domclique::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analytic(args) => commands::analytic(&args),
        Command::Exact(args) => commands::exact(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Figure(args) => commands::figure(&args),
    }
}
