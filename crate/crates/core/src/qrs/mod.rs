//! R-peak localisation and RR-interval series.
//!
//! Beat loci come either from the reference annotations or from a
//! slope-threshold detector; [`match_detections`] scores one against the other.

mod detector;
mod matcher;
mod rr;

pub use detector::{detect_r_peaks, DetectorConfig};
pub use matcher::{match_detections, matched_pairs, MatchStats};
pub use rr::{build_rr_series, r_peaks_from_annotations, RrInterval, RrSeries};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QrsError {
    #[error("signal of {len} samples is too short for a slope window of {window}")]
    EmptySignal { len: usize, window: usize },
    #[error("invalid detector configuration: {0}")]
    InvalidConfig(String),
    #[error("sampling rate must be positive")]
    InvalidSamplingRate,
}

/// Where beat loci come from when building a dataset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeakSource {
    #[default]
    Annotations,
    Slope,
}

impl std::fmt::Display for PeakSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PeakSource::Annotations => "annotations",
            PeakSource::Slope => "slope",
        })
    }
}

impl std::str::FromStr for PeakSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "annotations" => Ok(PeakSource::Annotations),
            "slope" => Ok(PeakSource::Slope),
            other => Err(format!(
                "unknown detector {other:?} (expected annotations|slope)"
            )),
        }
    }
}

/// Milliseconds to a whole number of samples at `fs`.
pub fn ms_to_samples(ms: f64, fs: f64) -> usize {
    (ms * fs / 1000.0).round().max(0.0) as usize
}
