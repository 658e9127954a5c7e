use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "recdef",
    version,
    about = "Orthogonal polynomials, resolvents and deformed spectral densities of three-term recursions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate p_n, q_n and their deformed counterparts at one point
    Polys(PolysArgs),
    /// Density on a grid, deformed if parameters are given
    Density(DensityArgs),
    /// Deformed coefficient table, optionally with bound states
    Deform(DeformArgs),
    /// Run invariant suites and report measured errors
    Validate(ValidateArgs),
    /// Analytic density against finite-matrix estimates
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// `chebyshev` or `constant:A,B`
    #[arg(long, default_value = "chebyshev", conflicts_with = "table")]
    pub family: String,
    /// JSON table {"a":[..],"b":[..],"a_inf":r,"b_inf":r}
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeformationArgs {
    /// One-parameter deformation a_0 -> a_0 + mu
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["mu_plus", "mu_minus", "mu_zero"])]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_plus: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_minus: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu_zero: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    Zero,
    Terminator,
}

#[derive(Debug, Args)]
pub struct ResolventArgs {
    /// Continued-fraction truncation depth
    #[arg(long, default_value_t = 200)]
    pub depth: usize,
    #[arg(long, value_enum, default_value = "terminator")]
    pub tail: TailArg,
    /// Imaginary shift of the evaluation point
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; standard output if omitted
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PolysArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    #[command(flatten)]
    pub deformation: DeformationArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    #[command(flatten)]
    pub deformation: DeformationArgs,
    /// LO:HI:COUNT, both ends included
    #[arg(long, default_value = "-1:1:201", allow_hyphen_values = true)]
    pub grid: String,
    #[command(flatten)]
    pub resolvent: ResolventArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DeformArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    #[command(flatten)]
    pub deformation: DeformationArgs,
    /// LO:HI interval outside the band to search for bound states
    #[arg(long, allow_hyphen_values = true)]
    pub search: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Wronskian,
    Orthogonality,
    Reductions,
    ChebyshevOracle,
    All,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[command(flatten)]
    pub sequence: SequenceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub sequence: SequenceArgs,
    #[command(flatten)]
    pub deformation: DeformationArgs,
    /// Compare the undeformed density instead of the default deformation
    #[arg(long, conflicts_with_all = ["mu", "mu_plus", "mu_minus", "mu_zero"])]
    pub undeformed: bool,
    #[arg(long, default_value_t = 10)]
    pub dim: usize,
    /// Comma-separated subset of finite-ratio,eigen-histogram; empty for none
    #[arg(long, default_value = "finite-ratio,eigen-histogram")]
    pub methods: String,
    #[arg(long, default_value = "-0.8:0.8:161", allow_hyphen_values = true)]
    pub grid: String,
    #[command(flatten)]
    pub resolvent: ResolventArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
