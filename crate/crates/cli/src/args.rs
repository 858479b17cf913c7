use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minpose::{Problem, SolverVariant};

#[derive(Debug, Parser)]
#[command(name = "minpose", version, about = "Minimal absolute-pose solvers from mixed point and line correspondences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Accuracy of the solvers on noiseless synthetic instances (CSV).
    Stability(StabilityArgs),
    /// Per-call solver timing in nanoseconds (CSV).
    Runtime(RuntimeArgs),
    /// Robust estimation on a correspondence file or a simulated scene (JSON).
    Ransac(RansacArgs),
    /// Every pose of the minimal solver for a minimal correspondence file (JSON).
    Solve(SolveArgs),
    /// Writes a synthetic correspondence file with its ground truth.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    P2p1l,
    P1p2l,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::P2p1l => Problem::P2P1L,
            ProblemArg::P1p2l => Problem::P1P2L,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    P2p1lGeneric,
    P2p1lCoplanar,
    P1p2lStabilized,
    P1p2lUnstabilized,
}

impl From<VariantArg> for SolverVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::P2p1lGeneric => SolverVariant::P2P1LGeneric,
            VariantArg::P2p1lCoplanar => SolverVariant::P2P1LCoplanar,
            VariantArg::P1p2lStabilized => SolverVariant::P1P2LStabilized,
            VariantArg::P1p2lUnstabilized => SolverVariant::P1P2LUnstabilized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalarArg {
    F64,
    F32,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Number of instances.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Place all world features on one plane.
    #[arg(long)]
    pub coplanar: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Force a solver variant instead of dispatching.
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long, value_enum, default_value_t = ScalarArg::F64)]
    pub scalar: ScalarArg,
    /// Worker threads; the output does not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RuntimeArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Number of timed calls.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..))]
    pub n: u64,
    /// Untimed calls before measuring.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1000..))]
    pub warmup: u64,
    #[arg(long)]
    pub coplanar: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ScalarArg::F64)]
    pub scalar: ScalarArg,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RansacArgs {
    /// Correspondence file to estimate from.
    #[arg(required_unless_present = "simulate", conflicts_with = "simulate")]
    pub file: Option<PathBuf>,
    /// Estimate from a simulated scene instead of a file.
    #[arg(long)]
    pub simulate: bool,
    #[arg(long, value_enum, default_value_t = ProblemArg::P2p1l)]
    pub solver: ProblemArg,
    /// Correspondences in the simulated scene.
    #[arg(long, default_value_t = 200)]
    pub n_total: usize,
    #[arg(long, default_value_t = 0.5)]
    pub outlier_ratio: f64,
    /// Bearing noise of the simulated scene in pixels.
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1000)]
    pub min_iters: usize,
    #[arg(long, default_value_t = 0.9999)]
    pub success_prob: f64,
    /// Inlier threshold in pixels.
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub coplanar: bool,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Grow the instance to this many correspondences (default: minimal).
    #[arg(long)]
    pub n_total: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub outlier_ratio: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
