use std::collections::BTreeMap;

use super::label::{BeatLabel, ClassCounts};
use super::stats::OutlierReport;

/// One fixed-length heartbeat centred on its R peak.
#[derive(Debug, Clone, PartialEq)]
pub struct Beat {
    pub samples: Vec<f32>,
    pub label: BeatLabel,
    pub record: String,
    /// R-peak position in the source record, in source samples.
    pub r_index: usize,
    /// Length of the extracted segment before padding, in source samples.
    pub raw_length: usize,
    pub window_id: usize,
    /// Offset of the signal-bearing span within `samples`.
    pub span_start: usize,
    /// Length of the signal-bearing span within `samples`.
    pub span_len: usize,
}

impl Beat {
    pub fn span(&self) -> &[f32] {
        &self.samples[self.span_start..self.span_start + self.span_len]
    }

    pub fn span_mut(&mut self) -> &mut [f32] {
        &mut self.samples[self.span_start..self.span_start + self.span_len]
    }

    /// True when every sample outside the span is exactly zero.
    pub fn padding_is_zero(&self) -> bool {
        let end = self.span_start + self.span_len;
        self.samples[..self.span_start]
            .iter()
            .chain(&self.samples[end..])
            .all(|v| *v == 0.0)
    }
}

/// Where every candidate beat of a record ended up.
///
/// In annotation mode `total` counts annotations; in detector mode it counts
/// detections. Either way the other fields partition it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Accounting {
    pub total: usize,
    pub emitted: usize,
    pub outlier_dropped: usize,
    pub non_beat: usize,
    /// Beat annotations outside the five-class grouping.
    pub unmapped: usize,
    /// Beats whose R peak lies beyond the end of the signal.
    pub edge_skips: usize,
    /// Detections with no reference beat in tolerance (detector mode).
    pub unlabeled: usize,
    /// Repeated peak positions after the first.
    pub duplicates: usize,
}

impl Accounting {
    pub fn accounted(&self) -> usize {
        self.emitted
            + self.outlier_dropped
            + self.non_beat
            + self.unmapped
            + self.edge_skips
            + self.unlabeled
            + self.duplicates
    }

    pub fn balances(&self) -> bool {
        self.accounted() == self.total
    }
}

impl std::ops::AddAssign for Accounting {
    fn add_assign(&mut self, rhs: Self) {
        self.total += rhs.total;
        self.emitted += rhs.emitted;
        self.outlier_dropped += rhs.outlier_dropped;
        self.non_beat += rhs.non_beat;
        self.unmapped += rhs.unmapped;
        self.edge_skips += rhs.edge_skips;
        self.unlabeled += rhs.unlabeled;
        self.duplicates += rhs.duplicates;
    }
}

/// Amplitude normalisation applied to delivered beats.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    None,
    #[default]
    Zscore,
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Normalization::None => "none",
            Normalization::Zscore => "zscore",
        })
    }
}

impl std::str::FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Normalization::None),
            "zscore" => Ok(Normalization::Zscore),
            other => Err(format!(
                "unknown normalization {other:?} (expected none|zscore)"
            )),
        }
    }
}

/// Everything needed to interpret a dataset without rebuilding it.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub global_size: usize,
    /// Samples per delivered beat (global size after downsampling).
    pub beat_len: usize,
    pub source_sampling_rate: u32,
    pub downsample_factor: usize,
    pub anti_alias: bool,
    pub normalization: Normalization,
    pub class_counts: ClassCounts,
    pub outlier_report: OutlierReport,
    /// Largest heartbeat size any window asked for.
    pub max_window_size: usize,
    pub zero_variance_beats: usize,
    pub split_seed: u64,
    pub config_hash: String,
    pub accounting: BTreeMap<String, Accounting>,
    /// Records left out, with the reason.
    pub skipped: BTreeMap<String, String>,
}

impl Default for DatasetManifest {
    fn default() -> Self {
        DatasetManifest {
            global_size: 0,
            beat_len: 0,
            source_sampling_rate: 0,
            downsample_factor: 1,
            anti_alias: false,
            normalization: Normalization::None,
            class_counts: ClassCounts::default(),
            outlier_report: OutlierReport::default(),
            max_window_size: 0,
            zero_variance_beats: 0,
            split_seed: 0,
            config_hash: String::new(),
            accounting: BTreeMap::new(),
            skipped: BTreeMap::new(),
        }
    }
}

impl DatasetManifest {
    /// Sampling rate of the delivered beats.
    pub fn sampling_rate(&self) -> f64 {
        f64::from(self.source_sampling_rate) / self.downsample_factor.max(1) as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub beats: Vec<Beat>,
    pub manifest: DatasetManifest,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.beats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beats.is_empty()
    }

    pub fn class_counts(&self) -> ClassCounts {
        self.beats.iter().map(|b| b.label).collect()
    }

    /// Subset with the given beat positions; the manifest is copied with its
    /// class counts recomputed.
    pub fn select(&self, positions: &[usize]) -> Dataset {
        let beats: Vec<Beat> = positions.iter().map(|&i| self.beats[i].clone()).collect();
        let mut manifest = self.manifest.clone();
        manifest.class_counts = beats.iter().map(|b| b.label).collect();
        Dataset { beats, manifest }
    }
}
