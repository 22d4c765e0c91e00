use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use densitycmp::{Method, RegionFilter, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "densitycmp",
    version,
    about = "Diffusion and Gaussian density estimates, and model-field comparison by Wasserstein distance"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the density of a single column of values.
    Estimate(EstimateArgs),
    /// Compare model and field data in one region.
    Compare(CompareArgs),
    /// Compare model and field data in all four regions.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Diff,
    Gauss,
    Both,
}

impl MethodArg {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Diff => vec![Method::Diffusion],
            MethodArg::Gauss => vec![Method::Gaussian],
            MethodArg::Both => vec![Method::Diffusion, Method::Gaussian],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    All,
    Euphotic,
    EuphoticExSo,
    EuphoticSo,
}

impl From<RegionArg> for RegionFilter {
    fn from(r: RegionArg) -> Self {
        match r {
            RegionArg::All => RegionFilter::All,
            RegionArg::Euphotic => RegionFilter::Euphotic,
            RegionArg::EuphoticExSo => RegionFilter::EuphoticExSo,
            RegionArg::EuphoticSo => RegionFilter::EuphoticSo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Masked,
    Full,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Masked => Scenario::Masked,
            ScenarioArg::Full => Scenario::Full,
        }
    }
}

/// Evaluation grid. Without `--lo/--hi` the domain is the data range padded
/// by `--margin` of the range on both sides.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Lower domain bound (data units); requires --hi.
    #[arg(long, allow_negative_numbers = true, requires = "hi")]
    pub lo: Option<f64>,
    /// Upper domain bound (data units); requires --lo.
    #[arg(long, allow_negative_numbers = true, requires = "lo")]
    pub hi: Option<f64>,
    /// Number of grid intervals; curves have points + 1 rows.
    #[arg(long, default_value_t = densitycmp::grid::DEFAULT_INTERVALS)]
    pub points: usize,
    /// Domain padding as a fraction of the data range.
    #[arg(long, default_value_t = densitycmp::grid::DEFAULT_MARGIN, allow_negative_numbers = true)]
    pub margin: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV file with a single `value` column.
    #[arg(long)]
    pub input: PathBuf,
    /// Estimator(s). The Gaussian bandwidth follows Scott's rule; its
    /// smoothing is reported as the kernel variance t (sigma squared).
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Curve CSV output; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Model CSV with header lat,lon,depth,decade,value.
    #[arg(long)]
    pub model: PathBuf,
    /// Field CSV with header lat,lon,depth,decade,value.
    #[arg(long)]
    pub field: PathBuf,
    /// First year of the decade to average over.
    #[arg(long, default_value_t = 1990)]
    pub decade: i32,
    #[arg(long, value_enum)]
    pub scenario: ScenarioArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    /// Model depth levels in meters, one per line, strictly increasing.
    #[arg(long)]
    pub depth_table: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value_t = RegionArg::All)]
    pub region: RegionArg,
    /// Report file (JSON). Curves go next to it with extension `.curves.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Output directory for per-region reports, curves and `index.csv`.
    #[arg(long)]
    pub out: PathBuf,
}
