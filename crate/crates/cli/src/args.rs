//! Command-line surface: four subcommands sharing flag groups.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trendtest_core::Variant;

#[derive(Parser, Debug)]
#[command(
    name = "trendtest",
    version,
    about = "Tests a time series for a constant mean, locates mean changes, \
             and runs seeded simulation tables. Results are printed as JSON."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Test whether the mean of a series is constant over time.
    Test(TestArgs),
    /// Recursively split a series at detected mean changes.
    Segment(SegmentArgs),
    /// Run the replication table described by a scenario file.
    Simulate(SimulateArgs),
    /// Estimate the long-run scale of a series.
    Lrv(LrvArgs),
}

/// Where the series comes from.
#[derive(Args, Debug)]
pub struct InputArgs {
    /// CSV file holding the series, one observation per row.
    #[arg(long)]
    pub input: PathBuf,
    /// Column with the values: a 0-based index or a header name.
    #[arg(long, default_value = "0")]
    pub column: String,
}

/// Statistic parameters shared by the analysis commands.
#[derive(Args, Debug)]
pub struct StatArgs {
    /// Block exponent: comparison blocks have length floor(n^s).
    #[arg(long, default_value_t = 0.7)]
    pub s: f64,
    /// Subsampling exponent: scale blocks have length floor(n^q).
    #[arg(long, default_value_t = 0.4)]
    pub q: f64,
    /// Neighbor radius, in scale-block lengths, for mean-robust centering.
    #[arg(long, default_value_t = 10.0)]
    pub c0: f64,
    /// One-sided significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Statistic variant: heteroscedasticity-robust or constant-variance.
    #[arg(long, value_enum, default_value_t = VariantArg::Full)]
    pub variant: VariantArg,
    /// Monte Carlo draws for the limit-variance estimate (full variant).
    #[arg(long, default_value_t = 7000)]
    pub psi_reps: usize,
    /// Seed for every random draw made by the command.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Transformations applied to the series before the command runs.
#[derive(Args, Debug)]
pub struct PreprocessArgs {
    /// Difference at this lag first (removes an additive period-lag
    /// component; shortens the series by the lag).
    #[arg(long)]
    pub diff_lag: Option<usize>,
    /// Then subtract a least-squares polynomial of this degree in rescaled
    /// time.
    #[arg(long)]
    pub detrend_degree: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub stat: StatArgs,
    #[command(flatten)]
    pub pre: PreprocessArgs,
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SegmentArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub stat: StatArgs,
    #[command(flatten)]
    pub pre: PreprocessArgs,
    /// Do not split segments shorter than this.
    #[arg(long, default_value_t = 50)]
    pub min_segment: usize,
    /// Fraction of the candidate window excluded at each end when locating
    /// a change.
    #[arg(long, default_value_t = 0.1)]
    pub exclusion: f64,
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// TOML scenario file: table mode, replication count, scenario list.
    #[arg(long)]
    pub scenario: PathBuf,
    #[command(flatten)]
    pub stat: StatArgs,
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LrvArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub pre: PreprocessArgs,
    /// Block exponent for the per-block scale summary.
    #[arg(long, default_value_t = 0.7)]
    pub s: f64,
    /// Subsampling exponent: scale blocks have length floor(n^q).
    #[arg(long, default_value_t = 0.4)]
    pub q: f64,
    /// Neighbor radius, in scale-block lengths, for mean-robust centering.
    #[arg(long, default_value_t = 10.0)]
    pub c0: f64,
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Clap-facing mirror of [`Variant`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Full,
    Simplified,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Simplified => Variant::Simplified,
        }
    }
}

impl VariantArg {
    pub fn label(self) -> &'static str {
        match self {
            VariantArg::Full => "full",
            VariantArg::Simplified => "simplified",
        }
    }
}
