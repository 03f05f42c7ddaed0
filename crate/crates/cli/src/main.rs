//! `psym`: irrep weights, reductions, projections and circuit compression
//! for many-electron wavefunctions.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "psym", version, about = "Point-group symmetry analysis of many-electron wavefunctions")]
struct Cli {
    /// Suppress the human-readable summary on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print and validate a character table.
    Characters(CharactersArgs),
    /// Irrep weights of a wavefunction.
    Weights(WeightsArgs),
    /// Reduce the representation spanned by a set of determinants.
    Reduce(ReduceArgs),
    /// Project a wavefunction onto one irrep, optionally filtering by energy.
    Project(ProjectArgs),
    /// Compress a wavefunction into brick-wall circuits of increasing depth.
    Compress(CompressArgs),
    /// Emit the Hückel ring fixture files.
    Model(ModelArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Pauli,
    Sampled,
}

#[derive(Args, Debug)]
pub struct Output {
    /// Report destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
pub struct SymmetryInput {
    /// Built-in group name (D2h, D6h, D5d) or a group JSON file.
    #[arg(long)]
    group: String,
    /// Representation JSON, either explicit matrices or raw basis data.
    #[arg(long)]
    rep: PathBuf,
}

/// Exactly one wavefunction source.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Binary statevector.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Determinant list JSON.
    #[arg(long)]
    dets: Option<PathBuf>,
    /// Binary MPS.
    #[arg(long)]
    mps: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CharactersArgs {
    #[arg(long)]
    group: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[command(flatten)]
    sym: SymmetryInput,
    #[command(flatten)]
    source: Source,
    /// UCJ parameters applied to the source state before analysis.
    #[arg(long)]
    ucj: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail (exit 3) unless the weights sum to one within 1e-8.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    sym: SymmetryInput,
    /// Determinant list JSON; with --from/--to its first entry is the reference.
    #[arg(long)]
    dets: PathBuf,
    /// Occupied shell label for single-excitation enumeration.
    #[arg(long, requires = "to")]
    from: Option<String>,
    /// Virtual shell label for single-excitation enumeration.
    #[arg(long, requires = "from")]
    to: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[command(flatten)]
    sym: SymmetryInput,
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    ucj: Option<PathBuf>,
    #[arg(long)]
    irrep: String,
    /// Integrals used for the energy report.
    #[arg(long)]
    fcidump: Option<PathBuf>,
    /// Keep eigencomponents below this energy after projecting (needs --fcidump).
    #[arg(long, requires = "fcidump")]
    cutoff: Option<f64>,
    /// Where to write the projected (and filtered) state.
    #[arg(long)]
    state_out: Option<PathBuf>,
    /// Fail (exit 3) when the projection vanishes.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
pub struct CompressArgs {
    /// Binary MPS target.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    mps: Option<PathBuf>,
    /// Binary statevector target.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Layer counts to try, e.g. `1-4` or `1,2,6`.
    #[arg(long, default_value = "1-4")]
    layers: String,
    /// Bond cap for intermediate states.
    #[arg(long, default_value_t = 256)]
    chi: usize,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    sweeps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Score this circuit against the target instead of optimizing.
    #[arg(long, conflicts_with = "circuit_out")]
    circuit: Option<PathBuf>,
    /// Where to write the lowest-infidelity circuit.
    #[arg(long)]
    circuit_out: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Ring size (even, 4 to 12).
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    beta: f64,
    /// D6h (ring size 6 only) or D2h.
    #[arg(long, default_value = "D6h")]
    group: String,
    /// Directory receiving the fixture files.
    #[arg(long)]
    out_dir: PathBuf,
}

/// Outcome classes with stable exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad or inconsistent input (exit 2).
    Input(anyhow::Error),
    /// A strict-mode check did not hold (exit 3).
    Strict(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let quiet = cli.quiet;
    let result = match cli.command {
        Command::Characters(a) => commands::characters(&a, quiet),
        Command::Weights(a) => commands::weights(&a, quiet),
        Command::Reduce(a) => commands::reduce(&a, quiet),
        Command::Project(a) => commands::project(&a, quiet),
        Command::Compress(a) => commands::compress(&a, quiet),
        Command::Model(a) => commands::model(&a, quiet),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Strict(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(3)
        }
    }
}
