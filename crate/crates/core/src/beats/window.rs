use super::BuildError;
use crate::qrs::RrSeries;

/// Seconds of signal per window.
pub const WINDOW_SECONDS: usize = 10;

/// A span `[start, end)` of a record and its heartbeat size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub end: usize,
    /// Rounded mean RR of the window, once computed.
    pub mean_rr: Option<usize>,
}

impl Window {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

pub fn window_len(fs: u32) -> usize {
    WINDOW_SECONDS * fs as usize
}

/// Consecutive 10 s spans covering `record_length` samples; the last one may
/// be shorter.
pub fn partition_windows(record_length: usize, fs: u32) -> Vec<Window> {
    let step = window_len(fs).max(1);
    (0..record_length)
        .step_by(step)
        .map(|start| Window {
            start,
            end: (start + step).min(record_length),
            mean_rr: None,
        })
        .collect()
}

fn round_half_away(x: f64) -> usize {
    // f64::round rounds halves away from zero.
    x.round() as usize
}

/// Mean length of the intervals whose terminal R peak lies in the window,
/// rounded to whole samples. Windows without such an interval fall back to
/// the mean over the whole series.
pub fn window_mean_rr(window: &Window, series: &RrSeries) -> Result<usize, BuildError> {
    if series.intervals.is_empty() {
        return Err(BuildError::RecordHasNoIntervals);
    }
    let first = series
        .intervals
        .partition_point(|i| i.to_index < window.start);
    let last = series
        .intervals
        .partition_point(|i| i.to_index < window.end);
    let inside = &series.intervals[first..last];
    let pool = if inside.is_empty() {
        &series.intervals[..]
    } else {
        inside
    };
    let sum: usize = pool.iter().map(|i| i.length).sum();
    Ok(round_half_away(sum as f64 / pool.len() as f64).max(1))
}
