use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use contraction_core::contraction::{ContractionGauge, Mode};
use contraction_core::spaces::{Family, DEFAULT_GENERATION_CAP, DEFAULT_SWEEP_CAP};

#[derive(Debug, Parser)]
#[command(name = "contraction", version, about = "Contraction spaces of graphs and their audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a built-in space and write it as a space file.
    Gen(GenArgs),
    /// Build the contraction space and report cone edges and diameter.
    Hat(RunArgs),
    /// Four-point hyperbolicity of the base space and its contraction space.
    Delta(RunArgs),
    /// Run named audits.
    Audit(AuditArgs),
    /// Contraction-space diameter across a family of sizes.
    Dichotomy(DichotomyArgs),
    /// Compare a free-product ball's contraction space with its Bass-Serre
    /// tree and coned-off graph.
    ConeCompare(ConeArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub family: Family,
    /// Side, vertex count, radius or budget, depending on the family.
    #[arg(long, visible_alias = "radius")]
    pub size: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GENERATION_CAP)]
    pub cap_vertices: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// A space file, or `FAMILY:SIZE` such as `grid:8` or `zfp:5`.
    #[arg(long)]
    pub space: String,
    #[arg(long, default_value_t = ContractionGauge::default())]
    pub gauge: ContractionGauge,
    #[arg(long, default_value_t = Mode::Thin)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Directory for report.json, report.csv and other outputs. Without it
    /// the JSON report goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest space to generate.
    #[arg(long, default_value_t = DEFAULT_GENERATION_CAP)]
    pub cap_vertices: usize,
    /// Largest space to sweep.
    #[arg(long, default_value_t = DEFAULT_SWEEP_CAP)]
    pub sweep_cap: usize,
    /// Examine every vertex, quadruple or pair instead of a seeded sample.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Designated segment to audit against; defaults to the first by name.
    #[arg(long)]
    pub segment: Option<String>,
    /// Record wall time per result. Reports are then no longer reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Audits to run.
    #[arg(required = true, value_name = "AUDIT")]
    pub names: Vec<String>,
    /// Skip the 27Q² audit when the fitted Q exceeds this.
    #[arg(long, default_value_t = 8.0)]
    pub q_cap: f64,
    /// Neighbourhood radius of the quadrangle estimate.
    #[arg(long, default_value_t = 2)]
    pub estimate_radius: u32,
}

#[derive(Debug, Args)]
pub struct DichotomyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated sizes; the family comes from `--space FAMILY`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Radius of the audited core; defaults to two less than the ball.
    #[arg(long)]
    pub core_depth: Option<u32>,
}
