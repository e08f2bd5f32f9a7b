use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "evenq",
    version,
    about = "Spin-flip invariants of even-qubit states"
)]
pub struct Cli {
    /// Print one JSON record per line instead of text.
    #[arg(long, global = true)]
    pub machine: bool,
    /// Absolute tolerance for input validation (default 1e-10).
    #[arg(long, global = true, value_name = "TOL")]
    pub tolerance_override: Option<f64>,
    /// Root seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the invariant of a state file.
    Measure(MeasureArgs),
    /// Build a decomposition of a density matrix.
    Decompose(DecomposeArgs),
    /// Minimize the average invariant numerically and compare with the formula.
    Oracle(OracleArgs),
    /// Run the entries of a JSON manifest.
    Batch(BatchArgs),
    /// Parse and validate a state file.
    Validate(ValidateArgs),
    /// Write a standard or seeded random state file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    #[default]
    Auto,
    R,
    Tau,
    XAnalytic,
    Contraction,
    Overlap,
    GmPure,
}

impl MethodArg {
    pub fn name(self) -> &'static str {
        match self {
            MethodArg::Auto => "auto",
            MethodArg::R => "r",
            MethodArg::Tau => "tau",
            MethodArg::XAnalytic => "x-analytic",
            MethodArg::Contraction => "contraction",
            MethodArg::Overlap => "overlap",
            MethodArg::GmPure => "gm-pure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Optimal,
    Equalized,
    Zero,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Write the ensemble as a state file.
    #[arg(long, value_name = "PATH")]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Fixed ensemble size; by default r, r+1, r+2 and 2r are tried.
    #[arg(long)]
    pub ensemble_size: Option<usize>,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    /// Minimize the average GM concurrence instead of the invariant (experimental).
    #[cfg(feature = "experimental-gm")]
    #[arg(long)]
    pub gm: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BatchArgs {
    pub manifest: PathBuf,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenState {
    Ghz,
    W,
    Bell,
    ProductZero,
    Werner,
    RandomPure,
    RandomDensity,
    RandomX,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub state: GenState,
    #[arg(long, short = 'n', default_value_t = 2)]
    pub qubits: usize,
    /// Werner mixing parameter.
    #[arg(long)]
    pub p: Option<f64>,
    /// Rank of a random density matrix (default full rank).
    #[arg(long)]
    pub rank: Option<usize>,
    /// Write Werner states as an X-state spec instead of a matrix.
    #[arg(long)]
    pub xspec: bool,
    /// Output path; the file is printed to stdout when absent.
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
}
