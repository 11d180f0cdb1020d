use std::collections::BTreeMap;

use super::BuildError;
use crate::qrs::RrSeries;

/// Percentile by linear interpolation between sorted ranks: rank
/// `p / 100 * (n - 1)`, interpolated between its floor and ceiling.
pub fn percentile(values: &[f64], p: f64) -> Result<f64, BuildError> {
    if values.is_empty() {
        return Err(BuildError::EmptyInput);
    }
    if !(0.0..=100.0).contains(&p) {
        return Err(BuildError::InvalidPercentile(p));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(percentile_sorted(&sorted, p))
}

pub(crate) fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    let rank = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn median(values: &[f64]) -> Result<f64, BuildError> {
    percentile(values, 50.0)
}

/// Tukey fences at 1.5 IQR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutlierFences {
    pub q1: f64,
    pub q3: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
}

impl OutlierFences {
    pub fn from_quartiles(q1: f64, q3: f64) -> Self {
        let iqr = q3 - q1;
        OutlierFences {
            q1,
            q3,
            lower_fence: q1 - 1.5 * iqr,
            upper_fence: q3 + 1.5 * iqr,
        }
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }

    pub fn classify(&self, value: f64) -> Outlier {
        if value > self.upper_fence {
            Outlier::Upper
        } else if value < self.lower_fence {
            Outlier::Lower
        } else {
            Outlier::Inside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outlier {
    Inside,
    Upper,
    Lower,
}

pub fn compute_fences(rr_lengths: &[f64]) -> Result<OutlierFences, BuildError> {
    if rr_lengths.is_empty() {
        return Err(BuildError::EmptyInput);
    }
    let mut sorted = rr_lengths.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(OutlierFences::from_quartiles(
        percentile_sorted(&sorted, 25.0),
        percentile_sorted(&sorted, 75.0),
    ))
}

/// Interval removals for one record (or summed over several).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutlierCounts {
    pub upper_removed: usize,
    pub lower_removed: usize,
    pub retained: usize,
    /// Beats excluded because their characteristic interval was removed.
    pub beats_dropped: usize,
}

impl OutlierCounts {
    pub fn original(&self) -> usize {
        self.upper_removed + self.lower_removed + self.retained
    }
}

impl std::ops::AddAssign for OutlierCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.upper_removed += rhs.upper_removed;
        self.lower_removed += rhs.lower_removed;
        self.retained += rhs.retained;
        self.beats_dropped += rhs.beats_dropped;
    }
}

/// Per-record outlier counts keyed by record name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutlierReport {
    pub records: BTreeMap<String, OutlierCounts>,
}

impl OutlierReport {
    pub fn total(&self) -> OutlierCounts {
        let mut t = OutlierCounts::default();
        for c in self.records.values() {
            t += *c;
        }
        t
    }
}

/// Drops intervals outside `fences` and the beats they characterise.
///
/// A beat's characteristic interval is the one starting at its R peak; the
/// last beat of the record, which starts none, uses the interval ending at
/// it. Beats with no interval at all are kept.
pub fn remove_outliers(series: &RrSeries, fences: &OutlierFences) -> (RrSeries, OutlierCounts) {
    let verdicts: Vec<Outlier> = series
        .intervals
        .iter()
        .map(|i| fences.classify(i.length as f64))
        .collect();

    let mut counts = OutlierCounts::default();
    for v in &verdicts {
        match v {
            Outlier::Inside => counts.retained += 1,
            Outlier::Upper => counts.upper_removed += 1,
            Outlier::Lower => counts.lower_removed += 1,
        }
    }

    let intervals = &series.intervals;
    let r_peaks: Vec<usize> = series
        .r_peaks
        .iter()
        .copied()
        .filter(|&p| {
            let owner = intervals
                .binary_search_by_key(&p, |i| i.from_index)
                .or_else(|_| intervals.binary_search_by_key(&p, |i| i.to_index));
            match owner {
                Ok(k) => verdicts[k] == Outlier::Inside,
                Err(_) => true,
            }
        })
        .collect();
    counts.beats_dropped = series.r_peaks.len() - r_peaks.len();

    let kept = intervals
        .iter()
        .zip(&verdicts)
        .filter(|(_, v)| **v == Outlier::Inside)
        .map(|(i, _)| *i)
        .collect();

    (
        RrSeries {
            r_peaks,
            intervals: kept,
            sampling_rate: series.sampling_rate,
        },
        counts,
    )
}
