use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qwot", version, about = "Quantum Wasserstein-2 distances and their verification campaigns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Squared distance between two states given as JSON matrix files.
    Distance(DistanceArgs),
    /// Run a seeded verification campaign.
    Verify(VerifyArgs),
    /// Print a random matrix in the JSON matrix format.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DefinitionArg {
    Gmpc,
    Dpt,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CampaignArg {
    Theorem1,
    Selfdist,
    Lemma1,
    Bounds,
    Transpose,
    GroundEnergy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnsembleArg {
    HaarPure,
    GinibreMixed,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GenKind {
    Pure,
    Mixed,
    Hermitian,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Solver tolerance on residuals and duality gap.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 200_000)]
    pub max_iters: usize,
    /// ADMM over-relaxation factor, in (0, 2).
    #[arg(long, default_value_t = 1.6)]
    pub over_relax: f64,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    /// First state (`ρ`).
    pub state_a: PathBuf,
    /// Second state (`σ`).
    pub state_b: PathBuf,
    /// One matrix or an array of matrices.
    pub operators: PathBuf,
    #[arg(long, value_enum, default_value_t = DefinitionArg::Both)]
    pub definition: DefinitionArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub campaign: CampaignArg,
    #[arg(long, env = "QWOT_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub n_ops: usize,
    /// Largest accepted deviation per trial [default: 1e-6, 1e-11 for lemma1].
    #[arg(long)]
    pub assert_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = EnsembleArg::Both)]
    pub ensemble: EnsembleArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write `<campaign>.csv` and `<campaign>.json` here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// What to print on stdout: the JSON summary or the CSV records.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run trials one after another instead of on the thread pool.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, env = "QWOT_SEED", default_value_t = 42)]
    pub seed: u64,
}
