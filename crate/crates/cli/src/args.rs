use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "properscore",
    version,
    about = "Score probabilistic forecasts and fit distributions by minimum score"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Suppress warnings on stderr
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score forecasts case by case
    #[command(subcommand)]
    Score(ScoreCommand),
    /// Fit a parametric family by minimizing a mean score
    Estimate(EstimateArgs),
    /// Reproducible simulation studies
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Debug, Subcommand)]
pub enum ScoreCommand {
    /// Closed-form scores for a parametric family; one CSV row per case
    Parametric(ParametricArgs),
    /// Scores for forecasts given as draws; one draws row per observation
    Sample(SampleArgs),
    /// Energy or variogram score for multivariate draws
    Mv(MvArgs),
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Sample-score quantile bands over a grid of sample sizes
    Convergence(ConvergenceArgs),
    /// Repeated minimum-CRPS and maximum likelihood fits of a normal sample
    Estimation(EstimationStudyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScoreName {
    Crps,
    Logs,
    Es,
    Vs,
}

impl ScoreName {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreName::Crps => "crps",
            ScoreName::Logs => "logs",
            ScoreName::Es => "es",
            ScoreName::Vs => "vs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Edf,
    Kde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write results here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Significant digits for CSV values (JSON always uses 17)
    #[arg(long, default_value_t = 17, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
}

#[derive(Debug, Args)]
pub struct ParametricArgs {
    /// CSV with a `y` column, optional `id`, and one column per parameter ("-" for stdin)
    pub input: PathBuf,

    #[arg(long)]
    pub family: String,

    #[arg(long, value_enum, default_value_t = ScoreName::Crps)]
    pub score: ScoreName,

    #[arg(long, value_enum)]
    pub method: Option<Method>,

    /// Constant parameter for every row, as name=value
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,

    /// Report failing rows instead of aborting
    #[arg(long)]
    pub skip_errors: bool,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// CSV with a `y` column and optional `id`
    pub obs: PathBuf,

    /// CSV of draws with a header row; row i holds the draws for observation i
    pub draws: PathBuf,

    /// CSV of draw weights with the same shape as the draws
    #[arg(long)]
    pub weights: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = ScoreName::Crps)]
    pub score: ScoreName,

    /// edf (CRPS only) or kde; defaults to edf for CRPS and kde for LogS
    #[arg(long, value_enum)]
    pub method: Option<Method>,

    /// Kernel bandwidth; defaults to the normal reference rule per row
    #[arg(long)]
    pub bw: Option<f64>,

    #[arg(long)]
    pub skip_errors: bool,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct MvArgs {
    /// JSON file {"cases": [{"id": ..., "y": [...], "dat": [[...], ...]}]}; `dat` lists the m samples, each of length d
    pub cases: PathBuf,

    #[arg(long, value_enum, default_value_t = ScoreName::Es)]
    pub score: ScoreName,

    /// Variogram order
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,

    /// CSV d x d matrix of variogram pair weights, with a header row
    #[arg(long)]
    pub weights: Option<PathBuf>,

    #[arg(long)]
    pub skip_errors: bool,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV holding the training observations
    pub data: PathBuf,

    /// Column with the observations
    #[arg(long, default_value = "y")]
    pub column: String,

    #[arg(long)]
    pub family: String,

    #[arg(long, value_enum, default_value_t = ScoreName::Crps)]
    pub score: ScoreName,

    /// Starting value, as name=value
    #[arg(long = "init", value_name = "NAME=VALUE")]
    pub init: Vec<String>,

    /// Parameter held fixed, as name=value
    #[arg(long = "fix", value_name = "NAME=VALUE")]
    pub fix: Vec<String>,

    /// Exit 0 and report the last iterate when the optimizer does not converge
    #[arg(long)]
    pub allow_nonconverged: bool,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, default_value_t = 500)]
    pub replications: usize,

    /// Number of log-spaced sample sizes
    #[arg(long, default_value_t = 51)]
    pub points: usize,

    #[arg(long, default_value_t = 50)]
    pub m_min: usize,

    #[arg(long, default_value_t = 5000)]
    pub m_max: usize,

    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub mean: f64,

    #[arg(long, default_value_t = 3.0)]
    pub sd: f64,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y: f64,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EstimationStudyArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, default_value_t = 200)]
    pub replications: usize,

    #[arg(long, default_value_t = 500)]
    pub n: usize,

    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub mean: f64,

    #[arg(long, default_value_t = 2.0)]
    pub sd: f64,

    #[command(flatten)]
    pub output: Output,
}
