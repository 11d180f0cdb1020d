//! Plain `key=value` rendering of [`DatasetManifest`].
//!
//! Lines are written in a fixed order so two identical builds produce
//! identical bytes. Per-beat provenance (`beat=` lines) is optional; the ECGB
//! container carries it so that import restores every beat field.

use std::fmt::Write as _;

use super::TransformError;
use crate::beats::{Accounting, Beat, BeatLabel, DatasetManifest, Normalization, OutlierCounts};

pub const MANIFEST_FORMAT: &str = "ecgforge-manifest/1";

/// Beat fields that live outside the sample matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeatProvenance {
    pub record: String,
    pub r_index: usize,
    pub raw_length: usize,
    pub window_id: usize,
    pub span_start: usize,
    pub span_len: usize,
}

impl From<&Beat> for BeatProvenance {
    fn from(b: &Beat) -> Self {
        BeatProvenance {
            record: b.record.clone(),
            r_index: b.r_index,
            raw_length: b.raw_length,
            window_id: b.window_id,
            span_start: b.span_start,
            span_len: b.span_len,
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

pub fn manifest_to_text(m: &DatasetManifest, beats: Option<&[Beat]>) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("format", &MANIFEST_FORMAT);
    kv("global_size", &m.global_size);
    kv("beat_len", &m.beat_len);
    kv("source_sampling_rate", &m.source_sampling_rate);
    kv("sampling_rate", &m.sampling_rate());
    kv("downsample_factor", &m.downsample_factor);
    kv("anti_alias", &m.anti_alias);
    kv("normalization", &m.normalization);
    kv("n_beats", &m.class_counts.total());
    for l in BeatLabel::ALL {
        kv(&format!("class.{l}"), &m.class_counts.get(l));
    }
    kv("max_window_size", &m.max_window_size);
    kv("zero_variance_beats", &m.zero_variance_beats);
    kv("split_seed", &m.split_seed);
    kv("config_hash", &m.config_hash);

    let t = m.outlier_report.total();
    kv("outliers.upper_removed", &t.upper_removed);
    kv("outliers.lower_removed", &t.lower_removed);
    kv("outliers.retained", &t.retained);
    kv("outliers.beats_dropped", &t.beats_dropped);
    for (rec, c) in &m.outlier_report.records {
        kv(
            &format!("outliers.record.{rec}"),
            &format_args!(
                "{},{},{},{}",
                c.upper_removed, c.lower_removed, c.retained, c.beats_dropped
            ),
        );
    }
    for (rec, a) in &m.accounting {
        kv(
            &format!("accounting.{rec}"),
            &format_args!(
                "{},{},{},{},{},{},{},{}",
                a.total,
                a.emitted,
                a.outlier_dropped,
                a.non_beat,
                a.unmapped,
                a.edge_skips,
                a.unlabeled,
                a.duplicates
            ),
        );
    }
    for (rec, why) in &m.skipped {
        kv(&format!("skipped.{rec}"), &one_line(why));
    }
    if let Some(beats) = beats {
        for b in beats {
            kv(
                "beat",
                &format_args!(
                    "{},{},{},{},{},{}",
                    b.record, b.r_index, b.raw_length, b.window_id, b.span_start, b.span_len
                ),
            );
        }
    }
    out
}

fn numbers(line: usize, value: &str, n: usize) -> Result<Vec<usize>, TransformError> {
    let parts: Vec<usize> = value
        .split(',')
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|e| bad(line, format!("{value:?}: {e}")))?;
    if parts.len() != n {
        return Err(bad(
            line,
            format!("expected {n} fields, got {}", parts.len()),
        ));
    }
    Ok(parts)
}

fn bad(line: usize, reason: impl Into<String>) -> TransformError {
    TransformError::InvalidManifest {
        line,
        reason: reason.into(),
    }
}

fn parse<T: std::str::FromStr>(line: usize, value: &str) -> Result<T, TransformError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| bad(line, format!("{value:?}: {e}")))
}

/// Parses text produced by [`manifest_to_text`]. Derived keys
/// (`sampling_rate`, `n_beats`, outlier totals) are ignored; unknown keys are
/// an error.
pub fn manifest_from_text(
    text: &str,
) -> Result<(DatasetManifest, Vec<BeatProvenance>), TransformError> {
    let mut m = DatasetManifest::default();
    let mut beats = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.is_empty() {
            continue;
        }
        let (key, value) = raw
            .split_once('=')
            .ok_or_else(|| bad(line, "missing '='"))?;
        match key {
            "format" if value == MANIFEST_FORMAT => {}
            "format" => return Err(bad(line, format!("unknown format {value:?}"))),
            "global_size" => m.global_size = parse(line, value)?,
            "beat_len" => m.beat_len = parse(line, value)?,
            "source_sampling_rate" => m.source_sampling_rate = parse(line, value)?,
            "downsample_factor" => m.downsample_factor = parse(line, value)?,
            "anti_alias" => m.anti_alias = parse(line, value)?,
            "normalization" => m.normalization = parse::<Normalization>(line, value)?,
            "max_window_size" => m.max_window_size = parse(line, value)?,
            "zero_variance_beats" => m.zero_variance_beats = parse(line, value)?,
            "split_seed" => m.split_seed = parse(line, value)?,
            "config_hash" => m.config_hash = value.to_owned(),
            "sampling_rate"
            | "n_beats"
            | "outliers.upper_removed"
            | "outliers.lower_removed"
            | "outliers.retained"
            | "outliers.beats_dropped" => {}
            "beat" => {
                let (record, rest) = value
                    .split_once(',')
                    .ok_or_else(|| bad(line, "beat line without fields"))?;
                let f = numbers(line, rest, 5)?;
                beats.push(BeatProvenance {
                    record: record.to_owned(),
                    r_index: f[0],
                    raw_length: f[1],
                    window_id: f[2],
                    span_start: f[3],
                    span_len: f[4],
                });
            }
            _ => {
                if let Some(l) = key.strip_prefix("class.") {
                    let label = l
                        .chars()
                        .next()
                        .filter(|_| l.len() == 1)
                        .and_then(BeatLabel::from_char)
                        .ok_or_else(|| bad(line, format!("unknown class {l:?}")))?;
                    m.class_counts.0[label.code() as usize] = parse(line, value)?;
                } else if let Some(rec) = key.strip_prefix("outliers.record.") {
                    let f = numbers(line, value, 4)?;
                    m.outlier_report.records.insert(
                        rec.to_owned(),
                        OutlierCounts {
                            upper_removed: f[0],
                            lower_removed: f[1],
                            retained: f[2],
                            beats_dropped: f[3],
                        },
                    );
                } else if let Some(rec) = key.strip_prefix("accounting.") {
                    let f = numbers(line, value, 8)?;
                    m.accounting.insert(
                        rec.to_owned(),
                        Accounting {
                            total: f[0],
                            emitted: f[1],
                            outlier_dropped: f[2],
                            non_beat: f[3],
                            unmapped: f[4],
                            edge_skips: f[5],
                            unlabeled: f[6],
                            duplicates: f[7],
                        },
                    );
                } else if let Some(rec) = key.strip_prefix("skipped.") {
                    m.skipped.insert(rec.to_owned(), value.to_owned());
                } else {
                    return Err(bad(line, format!("unknown key {key:?}")));
                }
            }
        }
    }
    Ok((m, beats))
}
