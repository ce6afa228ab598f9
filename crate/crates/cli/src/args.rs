use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cdcurv", version, about = "Curvature and similarity diagnostics for Cowen-Douglas shift tuples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients, weights along sample rays and the reciprocal polynomial.
    Kernel(KernelArgs),
    /// Curvature blocks over a grid.
    Curvature(CurvatureArgs),
    /// Shift-similarity verdict for two kernels.
    Similarity(SimilarityArgs),
    /// Curvature ratio `K_T / K_S` along a ray.
    Scan(ScanArgs),
    /// Re-run one of the worked examples and compare with the reference values.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    /// `K(w, w)` in closed form.
    Kernel,
    /// `||t(w)||^2` from the degree-N truncation.
    Truncated,
    /// The identity metric (flat, zero curvature).
    Constant,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct StencilArgs {
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    /// Accuracy order of the central differences (2 or 4).
    #[arg(long, default_value_t = 2)]
    pub order: u8,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Kernel descriptor: a JSON file or inline JSON.
    #[arg(long)]
    pub kernel: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, value_enum, default_value_t = MetricKind::Kernel)]
    pub metric: MetricKind,
    /// Ball dimension for `--metric constant` without a kernel.
    #[arg(long)]
    pub m: Option<usize>,
    /// Bundle rank for `--metric constant`.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    /// Truncation degree for `--metric truncated`.
    #[arg(long, default_value_t = 40)]
    pub n: usize,
    /// Grid: JSON, `radial:M:AXIS:RMAX:COUNT`, `radii:M:AXIS:R1,R2,..`,
    /// `lattice:M:RES:CAP` or `point:RE,IM,..` (axes are 1-based).
    /// Defaults to `radial:M:1:0.8:9`.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub stencil: StencilArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    /// Exactly two kernel descriptors.
    #[arg(long, num_args = 1, required = true)]
    pub kernel: Vec<String>,
    /// Longest ray length.
    #[arg(long, default_value_t = 500)]
    pub max_l: usize,
    #[arg(long, default_value_t = 0.5)]
    pub low: f64,
    #[arg(long, default_value_t = 10.0)]
    pub high: f64,
    /// Base points are all multi-indices up to this degree.
    #[arg(long, default_value_t = 3)]
    pub base_degree: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Two kernel descriptors: numerator `T`, then denominator `S`.
    #[arg(long, num_args = 1, required = true)]
    pub kernel: Vec<String>,
    /// Coordinate whose diagonal block is compared (1-based).
    #[arg(long, default_value_t = 1)]
    pub axis: usize,
    /// Radial grid (see `curvature --help`); defaults to
    /// `radii:M:AXIS:0.5,0.9,0.99,0.999`.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub stencil: StencilArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Example id.
    pub id: String,
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Kernel(a) => &a.common,
            Command::Curvature(a) => &a.common,
            Command::Similarity(a) => &a.common,
            Command::Scan(a) => &a.common,
            Command::Reproduce(a) => &a.common,
        }
    }
}
