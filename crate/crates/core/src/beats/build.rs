use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{Accounting, Beat, Dataset, DatasetManifest};
use super::label::{map_label, ClassCounts};
use super::segment::{center_on_r, extract_beat};
use super::stats::{compute_fences, median, remove_outliers, OutlierCounts, OutlierFences};
use super::window::{partition_windows, window_len, window_mean_rr};
use super::BuildError;
use crate::qrs::{
    build_rr_series, detect_r_peaks, matched_pairs, ms_to_samples, r_peaks_from_annotations,
    DetectorConfig, PeakSource,
};
use crate::wfdb::{is_beat_code, load_record, AnnotatedRecord, WfdbError};

/// Default fixed beat length in source samples.
pub const DEFAULT_GLOBAL_SIZE: usize = 450;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildConfig {
    /// Signal the beats are cut from.
    pub channel: usize,
    pub peak_source: PeakSource,
    pub detector: DetectorConfig,
    /// Tolerance for labelling detections from annotations.
    pub match_tolerance_ms: f64,
    pub global_size: usize,
    /// Truncate beats longer than `global_size` instead of failing the record.
    pub clip_oversize: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            channel: 0,
            peak_source: PeakSource::Annotations,
            detector: DetectorConfig::default(),
            match_tolerance_ms: 150.0,
            global_size: DEFAULT_GLOBAL_SIZE,
            clip_oversize: false,
        }
    }
}

/// Output of the pipeline for a single record.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordBuild {
    pub record: String,
    pub sampling_rate: u32,
    pub beats: Vec<Beat>,
    pub fences: OutlierFences,
    pub outliers: OutlierCounts,
    pub accounting: Accounting,
    /// Largest window size among windows that supplied a beat.
    pub max_window_size: usize,
}

struct Candidate {
    position: usize,
    symbol: Option<char>,
}

fn candidates(
    record: &AnnotatedRecord,
    cfg: &BuildConfig,
    accounting: &mut Accounting,
) -> Result<Vec<Candidate>, BuildError> {
    let beat_annotations: Vec<(usize, char)> = record
        .annotations
        .iter()
        .filter(|a| is_beat_code(a.code))
        .map(|a| (a.sample_index as usize, a.symbol))
        .collect();

    let mut found = match cfg.peak_source {
        PeakSource::Annotations => {
            accounting.total = record.annotations.len();
            accounting.non_beat = record.annotations.len() - beat_annotations.len();
            beat_annotations
                .iter()
                .map(|&(position, symbol)| Candidate {
                    position,
                    symbol: Some(symbol),
                })
                .collect::<Vec<_>>()
        }
        PeakSource::Slope => {
            let fs = f64::from(record.sampling_rate());
            let detected = detect_r_peaks(&record.channels[cfg.channel], fs, &cfg.detector)?;
            accounting.total = detected.len();
            let reference: Vec<usize> = beat_annotations.iter().map(|b| b.0).collect();
            let tol = ms_to_samples(cfg.match_tolerance_ms, fs);
            let mut symbols = vec![None; detected.len()];
            for (d, r) in matched_pairs(&detected, &reference, tol) {
                symbols[d] = Some(beat_annotations[r].1);
            }
            detected
                .into_iter()
                .zip(symbols)
                .map(|(position, symbol)| Candidate { position, symbol })
                .collect()
        }
    };

    found.sort_by_key(|c| c.position);
    let before = found.len();
    found.dedup_by_key(|c| c.position);
    accounting.duplicates = before - found.len();
    Ok(found)
}

/// Runs one record through peak location, RR outlier removal, windowed
/// sizing, centred extraction, padding and labelling.
pub fn build_record(
    record: &AnnotatedRecord,
    cfg: &BuildConfig,
) -> Result<RecordBuild, BuildError> {
    if cfg.channel >= record.channels.len() {
        return Err(BuildError::ChannelOutOfRange {
            channel: cfg.channel,
            n_signals: record.channels.len(),
        });
    }
    if cfg.global_size == 0 {
        return Err(BuildError::InvalidConfig(
            "global_size must be at least 1".into(),
        ));
    }
    let fs = record.sampling_rate();
    let channel = &record.channels[cfg.channel];
    let n_samples = channel.len();

    let mut accounting = Accounting::default();
    let found = candidates(record, cfg, &mut accounting)?;
    let peaks: Vec<usize> = found.iter().map(|c| c.position).collect();

    let series = build_rr_series(&peaks, fs);
    if series.intervals.is_empty() {
        return Err(BuildError::RecordHasNoIntervals);
    }
    let fences = compute_fences(&series.lengths())?;
    let (filtered, outliers) = remove_outliers(&series, &fences);

    let windows = partition_windows(n_samples, fs);
    let sizes = windows
        .iter()
        .map(|w| window_mean_rr(w, &filtered))
        .collect::<Result<Vec<_>, _>>()?;
    let step = window_len(fs);

    let mut beats = Vec::new();
    let mut max_window_size = 0;
    let mut retained = filtered.r_peaks.iter().peekable();
    for cand in &found {
        let kept = retained.next_if_eq(&&cand.position).is_some();
        if !kept {
            accounting.outlier_dropped += 1;
            continue;
        }
        let Some(symbol) = cand.symbol else {
            accounting.unlabeled += 1;
            continue;
        };
        let label = match map_label(symbol) {
            Ok(Some(label)) => label,
            Ok(None) | Err(BuildError::UnknownBeatType(_)) => {
                accounting.unmapped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if cand.position >= n_samples {
            accounting.edge_skips += 1;
            continue;
        }

        let window_id = cand.position / step;
        let wanted = sizes[window_id];
        max_window_size = max_window_size.max(wanted);
        let size = if wanted > cfg.global_size {
            if !cfg.clip_oversize {
                return Err(BuildError::BeatLongerThanGlobal {
                    size: wanted,
                    global_size: cfg.global_size,
                });
            }
            cfg.global_size
        } else {
            wanted
        };

        let raw = extract_beat(channel, cand.position, size);
        let (samples, span_start) = center_on_r(&raw, size / 2, cfg.global_size)?;
        beats.push(Beat {
            samples,
            label,
            record: record.name().to_owned(),
            r_index: cand.position,
            raw_length: size,
            window_id,
            span_start,
            span_len: size,
        });
        accounting.emitted += 1;
    }
    debug_assert_eq!(accounting.outlier_dropped, outliers.beats_dropped);

    Ok(RecordBuild {
        record: record.name().to_owned(),
        sampling_rate: fs,
        beats,
        fences,
        outliers,
        accounting,
        max_window_size,
    })
}

/// Merges per-record results in record-name order. Failed records go to the
/// manifest's skip list.
pub fn assemble(
    results: impl IntoIterator<Item = (String, Result<RecordBuild, BuildError>)>,
    cfg: &BuildConfig,
) -> Dataset {
    let mut sorted: Vec<_> = results.into_iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));

    let mut manifest = DatasetManifest {
        global_size: cfg.global_size,
        beat_len: cfg.global_size,
        ..DatasetManifest::default()
    };
    let mut beats = Vec::new();
    for (name, result) in sorted {
        match result {
            Ok(built) => {
                if manifest.source_sampling_rate == 0 {
                    manifest.source_sampling_rate = built.sampling_rate;
                }
                manifest.max_window_size = manifest.max_window_size.max(built.max_window_size);
                manifest
                    .outlier_report
                    .records
                    .insert(name.clone(), built.outliers);
                manifest.accounting.insert(name, built.accounting);
                beats.extend(built.beats);
            }
            Err(e) => {
                log::warn!("skipping record {name}: {e}");
                manifest.skipped.insert(name, e.to_string());
            }
        }
    }
    manifest.class_counts = beats.iter().map(|b| b.label).collect();
    Dataset { beats, manifest }
}

/// Builds a dataset from records already in memory.
pub fn build_dataset(records: &[AnnotatedRecord], cfg: &BuildConfig) -> Dataset {
    let results: Vec<_> = records
        .par_iter()
        .map(|r| (r.name().to_owned(), build_record(r, cfg)))
        .collect();
    assemble(results, cfg)
}

/// Loads and builds records from `dir` in parallel, keeping only the beats.
pub fn build_from_dir(dir: &Path, names: &[String], cfg: &BuildConfig) -> Dataset {
    let results: Vec<_> = names
        .par_iter()
        .map(|name| {
            let built = load_record(dir, name)
                .map_err(|e| match e {
                    // The record name is already the key of the skip list.
                    WfdbError::Record { source, .. } => BuildError::Load(*source),
                    other => BuildError::Load(other),
                })
                .and_then(|r| build_record(&r, cfg));
            (name.clone(), built)
        })
        .collect();
    assemble(results, cfg)
}

/// Median annotation-derived RR length of each record, in samples. Records
/// with fewer than two beats are left out.
pub fn median_length_statistic(records: &[AnnotatedRecord]) -> BTreeMap<String, f64> {
    records
        .iter()
        .filter_map(|r| {
            let series =
                build_rr_series(&r_peaks_from_annotations(&r.annotations), r.sampling_rate());
            median(&series.lengths())
                .ok()
                .map(|m| (r.name().to_owned(), m))
        })
        .collect()
}

/// Class tally of beat annotations before any filtering.
pub fn annotation_class_counts(record: &AnnotatedRecord) -> (ClassCounts, usize) {
    let mut counts = ClassCounts::default();
    let mut unmapped = 0;
    for a in record.annotations.iter().filter(|a| is_beat_code(a.code)) {
        match map_label(a.symbol) {
            Ok(Some(l)) => counts.add(l),
            _ => unmapped += 1,
        }
    }
    (counts, unmapped)
}
