//! From RR series to labelled, fixed-length, QRS-centred beats.
//!
//! Per record: RR intervals are screened with Tukey fences, the record is cut
//! into 10 s windows, each window's mean RR sets the size of the beats whose
//! R peaks fall in it, and every beat is cut around its R peak and zero-padded
//! to a global size.

mod build;
mod dataset;
mod label;
mod segment;
mod stats;
mod window;

pub use build::{
    annotation_class_counts, assemble, build_dataset, build_from_dir, build_record,
    median_length_statistic, BuildConfig, RecordBuild, DEFAULT_GLOBAL_SIZE,
};
pub use dataset::{Accounting, Beat, Dataset, DatasetManifest, Normalization};
pub use label::{map_label, BeatLabel, ClassCounts};
pub use segment::{center_on_r, extract_beat, pad_center};
pub use stats::{
    compute_fences, median, percentile, remove_outliers, Outlier, OutlierCounts, OutlierFences,
    OutlierReport,
};
pub use window::{partition_windows, window_len, window_mean_rr, Window, WINDOW_SECONDS};

use thiserror::Error;

use crate::qrs::QrsError;
use crate::wfdb::WfdbError;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("empty input")]
    EmptyInput,
    #[error("percentile {0} outside [0, 100]")]
    InvalidPercentile(f64),
    #[error("record has fewer than two retained R peaks")]
    RecordHasNoIntervals,
    #[error("beat of {size} samples exceeds the global size of {global_size} (use clip_oversize to truncate)")]
    BeatLongerThanGlobal { size: usize, global_size: usize },
    #[error("beat type {0:?} has no AAMI class")]
    UnknownBeatType(char),
    #[error("channel {channel} requested but the record has {n_signals} signals")]
    ChannelOutOfRange { channel: usize, n_signals: usize },
    #[error("invalid build configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Detector(#[from] QrsError),
    #[error(transparent)]
    Load(#[from] WfdbError),
}
