use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use layers_core::point::DEFAULT_POINT_CAP;
use layers_core::Engine;

/// Exact convex layers of integer grids and point sets.
#[derive(Debug, Parser)]
#[command(name = "layers", version)]
pub struct Cli {
    /// Worker threads for the engines (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Peel a grid or a point-set file and report the layers.
    Peel(PeelArgs),
    /// Build, write and re-verify both layer-number certificates of a grid.
    Certify(CertifyArgs),
    /// Check a certificate file without peeling.
    Verify(VerifyArgs),
    /// Draw peeling steps of a planar input as SVG.
    Render(RenderArgs),
    /// Fit the growth exponent of the layer number of planar grids.
    Growth(GrowthArgs),
}

/// A centered grid `[-n, n]^d`, given by radius or by side length.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Radius of the centered grid `[-n, n]^d`.
    #[arg(long, conflicts_with = "side")]
    pub n: Option<u64>,
    /// Number of lattice points per axis. Odd sides map to radius
    /// `(side - 1) / 2`; even sides give `[-side/2, side/2 - 1]^d`.
    #[arg(long)]
    pub side: Option<u64>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct CapArgs {
    /// Refuse inputs with more points than this.
    #[arg(long, env = "LAYERS_POINT_CAP", default_value_t = DEFAULT_POINT_CAP)]
    pub cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Auto,
    Generic,
    Orbit,
    #[value(name = "2d")]
    Planar,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Generic => Engine::Generic,
            EngineArg::Orbit => Engine::Orbit,
            EngineArg::Planar => Engine::Planar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayerFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct PeelArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Point-set file: one point per line, coordinates separated by
    /// whitespace.
    #[arg(long, conflicts_with_all = ["d", "n", "side"])]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    pub engine: EngineArg,
    /// Layer data format. Without --output the data goes to stdout and the
    /// summary to stderr.
    #[arg(long, value_enum)]
    pub format: Option<LayerFormat>,
    /// Layer data file; the format defaults to the file extension.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also run this engine and fail if the assignments differ.
    #[arg(long, value_enum)]
    pub cross_check: Option<EngineArg>,
    #[command(flatten)]
    pub cap: CapArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    pub engine: EngineArg,
    /// Directory for the two certificate files.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
    #[command(flatten)]
    pub cap: CapArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Certificate file.
    pub file: PathBuf,
    /// Also peel the grid and compare the recorded layers.
    #[arg(long)]
    pub recompute: bool,
    #[command(flatten)]
    pub cap: CapArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, conflicts_with_all = ["d", "n", "side"])]
    pub input: Option<PathBuf>,
    /// Peeling steps (1-based layer indices) to draw.
    #[arg(long, value_delimiter = ',', required = true)]
    pub steps: Vec<usize>,
    /// Directory for `step-<i>.svg`.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    pub engine: EngineArg,
    #[command(flatten)]
    pub cap: CapArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GrowthArgs {
    /// Side lengths of the planar grids to peel.
    #[arg(long, value_delimiter = ',', default_value = "51,101,201,401")]
    pub sides: Vec<u64>,
    #[arg(long, value_enum, default_value_t = EngineArg::Planar)]
    pub engine: EngineArg,
    #[command(flatten)]
    pub cap: CapArgs,
}
