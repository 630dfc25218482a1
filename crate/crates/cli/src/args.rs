use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use solvency_core::dataset::LabelMode;
use solvency_core::eval::ReportFormat;
use solvency_core::ordinal::CombineRule;

use crate::config::{EvalProtocol, PipelineConfig};

#[derive(Debug, Parser)]
#[command(
    name = "solvency",
    version,
    about = "Ordinal solvency grading for non-life insurers"
)]
pub struct Cli {
    /// Seed for every random step, or `random` to draw one from the OS.
    #[arg(long, global = true, default_value = "1")]
    pub seed: SeedArg,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,

    /// Suppress informational messages on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    /// Re-run a configuration saved in a JSON report or summary.
    #[arg(long, value_name = "FILE")]
    pub from_config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("random") {
            return Ok(SeedArg::Random);
        }
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an unsigned integer or `random`, got `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => ReportFormat::Text,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LabelModeArg {
    Auto,
    Class,
    Car,
    TcaTcr,
}

impl From<LabelModeArg> for LabelMode {
    fn from(m: LabelModeArg) -> Self {
        match m {
            LabelModeArg::Auto => LabelMode::Auto,
            LabelModeArg::Class => LabelMode::Direct,
            LabelModeArg::Car => LabelMode::FromCar,
            LabelModeArg::TcaTcr => LabelMode::FromTcaTcr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CombineArg {
    Telescoping,
    TopComplement,
}

impl From<CombineArg> for CombineRule {
    fn from(c: CombineArg) -> Self {
        match c {
            CombineArg::Telescoping => CombineRule::Telescoping,
            CombineArg::TopComplement => CombineRule::TopComplement,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grade rows by capital adequacy and append `class` and `action_level`.
    Label {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where labels come from; `auto` picks class, then car, then tca/tcr.
        #[arg(long, value_enum, default_value_t = LabelModeArg::Auto)]
        label_mode: LabelModeArg,
    },
    /// Print the attributes chosen by correlation-based selection.
    Select {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = LabelModeArg::Auto)]
        label_mode: LabelModeArg,
        #[arg(long, default_value_t = 10)]
        bins: usize,
    },
    /// Fit the pipeline and write the model as JSON.
    Train {
        input: PathBuf,
        /// Model file to write.
        #[arg(short, long)]
        output: PathBuf,
        /// Write the training summary here instead of stdout.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = LabelModeArg::Auto)]
        label_mode: LabelModeArg,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Evaluate the pipeline under a protocol and print a report.
    Evaluate {
        input: PathBuf,
        /// `cv<k>` (e.g. cv10), `split<pct>` test share (e.g. split30), or `holdout:<path>`.
        #[arg(long, default_value = "cv10")]
        protocol: EvalProtocol,
        /// Resample the whole dataset once before splitting it. Duplicates
        /// then leak across folds, which inflates the scores.
        #[arg(long, visible_alias = "paper-protocol")]
        resample_before_split: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = LabelModeArg::Auto)]
        label_mode: LabelModeArg,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Append predictions, per-class scores and action levels to a CSV.
    Classify {
        #[arg(short, long)]
        model: PathBuf,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a synthetic labeled dataset.
    Synth {
        /// Use the 45/13/17/541 class counts (the default).
        #[arg(long, visible_alias = "table2", conflicts_with = "counts")]
        reference_counts: bool,
        /// Instances per class, Insolvency first.
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Train on all attributes.
    #[arg(long)]
    pub no_select: bool,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    /// Train on the data as given.
    #[arg(long)]
    pub no_resample: bool,
    /// 0 keeps class proportions, 1 draws classes uniformly.
    #[arg(long, default_value_t = 1.0)]
    pub bias: f64,
    /// Resampled size; defaults to the training size.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub min_leaf: usize,
    #[arg(long)]
    pub unpruned: bool,
    #[arg(long, default_value_t = 0.25)]
    pub confidence: f64,
    /// Train one multiclass tree instead of the ordinal decomposition.
    #[arg(long)]
    pub no_ordinal: bool,
    #[arg(long, value_enum, default_value_t = CombineArg::Telescoping)]
    pub combine: CombineArg,
    #[arg(long)]
    pub laplace: bool,
    /// Rescale scores to sum to 1.
    #[arg(long)]
    pub normalize: bool,
}

impl PipelineArgs {
    pub fn to_config(&self, resample_before_split: bool) -> PipelineConfig {
        PipelineConfig {
            select: !self.no_select,
            bins: self.bins,
            resample: !self.no_resample,
            bias: self.bias,
            size: self.size,
            min_leaf: self.min_leaf,
            pruned: !self.unpruned,
            confidence: self.confidence,
            ordinal: !self.no_ordinal,
            combine: self.combine.into(),
            laplace: self.laplace,
            normalize: self.normalize,
            resample_before_split,
        }
    }
}
