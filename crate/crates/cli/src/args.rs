use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ecgforge_core::beats::Normalization;
use ecgforge_core::PeakSource;

#[derive(Debug, Parser)]
#[command(
    name = "ecgforge",
    version,
    about = "QRS-centred heartbeat datasets from MIT-BIH records"
)]
pub struct Cli {
    /// Directory holding the .hea/.dat/.atr files.
    #[arg(long, global = true, env = "ECGFORGE_DATA")]
    pub data_dir: Option<PathBuf>,

    /// TOML config file; command-line flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// More logging (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download the 48 archive records.
    Fetch(FetchArgs),
    /// Score the slope detector against the reference annotations.
    Qrs(QrsArgs),
    /// RR-length statistics, outlier counts and class distribution.
    Stats(StatsArgs),
    /// Build the dataset and write ECGB, CSV and manifest.
    Build(BuildArgs),
    /// Build, split into train/test and write one format.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    /// Base URL of the archive.
    #[arg(long, default_value = ecgforge_core::mitdb::ARCHIVE_URL)]
    pub base_url: String,
    /// Re-download files that are already present.
    #[arg(long)]
    pub force: bool,
    /// Only these records (repeatable).
    #[arg(long = "record", value_name = "NAME")]
    pub records: Vec<String>,
}

#[derive(Debug, Args)]
pub struct QrsArgs {
    /// Records to process (repeatable; default: all 48).
    #[arg(long = "record", value_name = "NAME")]
    pub records: Vec<String>,
    /// Signal channel to read (default 0).
    #[arg(long)]
    pub channel: Option<usize>,
    /// Match tolerance in milliseconds.
    #[arg(long)]
    pub tolerance_ms: Option<f64>,
    /// Exit 3 unless sensitivity and PPV reach this value for every record.
    #[arg(long, value_name = "MIN")]
    pub check: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Records to process (repeatable; default: all 48).
    #[arg(long = "record", value_name = "NAME")]
    pub records: Vec<String>,
    /// Write the RR-length box plot as SVG.
    #[arg(long, value_name = "FILE")]
    pub boxplot: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Exit 3 unless class counts match the published totals.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Detector {
    Annotations,
    Slope,
}

impl From<Detector> for PeakSource {
    fn from(d: Detector) -> Self {
        match d {
            Detector::Annotations => PeakSource::Annotations,
            Detector::Slope => PeakSource::Slope,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Normalize {
    None,
    Zscore,
}

impl From<Normalize> for Normalization {
    fn from(n: Normalize) -> Self {
        match n {
            Normalize::None => Normalization::None,
            Normalize::Zscore => Normalization::Zscore,
        }
    }
}

/// Settings shared by `build` and `export`.
#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Records to process (repeatable; default: all 48).
    #[arg(long = "record", value_name = "NAME")]
    pub records: Vec<String>,
    /// Signal channel to read (default 0).
    #[arg(long)]
    pub channel: Option<usize>,
    /// Where R peaks come from.
    #[arg(long, value_enum)]
    pub detector: Option<Detector>,
    /// Fixed beat length before downsampling, in samples.
    #[arg(long)]
    pub global_size: Option<usize>,
    /// Truncate beats longer than the global size instead of skipping the record.
    #[arg(long)]
    pub clip_oversize: bool,
    /// Keep every FACTOR-th sample.
    #[arg(long, value_name = "FACTOR")]
    pub downsample: Option<usize>,
    /// Moving-average filter before downsampling.
    #[arg(long)]
    pub anti_alias: bool,
    /// Per-beat normalisation.
    #[arg(long, value_enum)]
    pub normalize: Option<Normalize>,
    /// Output directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Artifact base name.
    #[arg(long)]
    pub stem: Option<String>,
    /// Column header row in CSV output.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Exit 3 unless class counts fall in the published tolerance band.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Ecgb,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    #[arg(long, value_enum, default_value = "ecgb")]
    pub format: Format,
    /// Training fraction.
    #[arg(long, value_name = "FRACTION")]
    pub split: Option<f64>,
    /// Shuffle seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the whole dataset instead of train/test files.
    #[arg(long, conflicts_with = "split")]
    pub no_split: bool,
    /// Shuffle all beats together rather than per class.
    #[arg(long)]
    pub no_stratify: bool,
}
