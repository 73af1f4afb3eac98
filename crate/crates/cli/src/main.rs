//! `locfield` — bounds, checks and probe searches for local-field estimation.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or parse
//! error, 3 numerical-domain error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "locfield", version, about = "Multiparameter local-field estimation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probe-optimized lower bound on Tr(W F^-1); with --state, also the achieved value.
    Bound(BoundArgs),
    /// Run the self-check suite for (sigma_z, W(N, alpha)).
    Verify(VerifyArgs),
    /// Minimize the figure of merit over a grid of correlations and probe families.
    Sweep(SweepArgs),
    /// Fisher information matrix of a state file.
    Qfim(QfimArgs),
    /// Write a built-in probe state to the state-file format.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Strict,
    Pseudo,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// Number of qubit sites for the built-in sigma_z family.
    #[arg(long, conflicts_with = "hamiltonian")]
    n: Option<usize>,
    /// Correlation parameter of the built-in weight, in (0, 1) [default: 0.5].
    #[arg(long)]
    alpha: Option<f64>,
    /// `w-bar` (correlated family), `identity`, or a weight file.
    #[arg(long, default_value = "w-bar")]
    weight: String,
    /// Hamiltonian file instead of the built-in sigma_z family.
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Probe state (pure) to evaluate against the bound.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pseudo")]
    policy: PolicyArg,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Site counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    n: Vec<usize>,
    /// `start:stop:step`, inclusive of stop.
    #[arg(long, default_value = "0.1:0.9:0.1")]
    alpha_grid: String,
    /// Comma-separated families: ghz, product, parametric_n3, general_pure.
    #[arg(long, value_delimiter = ',', default_value = "ghz,product")]
    families: Vec<String>,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory for per-task JSON convergence traces.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct QfimArgs {
    /// State file (pure amplitudes or `density` block).
    #[arg(long)]
    state: PathBuf,
    /// Hamiltonian file (default: sigma_z on every site; qubits only).
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeKind {
    /// GHZ-type probe; defaults to the attaining angles for --alpha.
    Ghz,
    /// |+>^N
    Plus,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long, value_enum)]
    kind: ProbeKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Override the GHZ angle theta.
    #[arg(long, requires = "phi")]
    theta: Option<f64>,
    /// Override the GHZ relative phase phi.
    #[arg(long, requires = "theta")]
    phi: Option<f64>,
    /// Output file (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(a) => commands::bound(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Qfim(a) => commands::qfim(a),
        Command::Probe(a) => commands::probe(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
