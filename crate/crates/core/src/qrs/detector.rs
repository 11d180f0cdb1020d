use super::{ms_to_samples, QrsError};

/// Parameters of the slope-threshold detector.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct DetectorConfig {
    /// Span of the slope estimate in samples.
    pub slope_window: usize,
    /// Fraction of the running slope maximum that counts as a crossing.
    pub threshold_fraction: f64,
    /// Minimum spacing between detections, in milliseconds.
    pub refractory_ms: f64,
    /// Half-width of the window searched for the R apex, in milliseconds.
    pub search_back_ms: f64,
    /// Time for the running slope maximum to decay to half, in seconds.
    pub max_half_life_s: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            slope_window: 8,
            threshold_fraction: 0.45,
            refractory_ms: 200.0,
            search_back_ms: 100.0,
            max_half_life_s: 2.0,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<(), QrsError> {
        if self.slope_window == 0 {
            return Err(QrsError::InvalidConfig(
                "slope_window must be at least 1".into(),
            ));
        }
        if !(self.threshold_fraction > 0.0 && self.threshold_fraction < 1.0) {
            return Err(QrsError::InvalidConfig(format!(
                "threshold_fraction must lie in (0, 1), got {}",
                self.threshold_fraction
            )));
        }
        if self.refractory_ms.is_nan() || self.refractory_ms <= 0.0 {
            return Err(QrsError::InvalidConfig(
                "refractory_ms must be positive".into(),
            ));
        }
        if !(self.search_back_ms >= 0.0 && self.max_half_life_s > 0.0) {
            return Err(QrsError::InvalidConfig(
                "search_back_ms must be >= 0 and max_half_life_s > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Finds R peaks with a slope threshold.
///
/// The slope at `n` is the sum of the last `slope_window` first differences,
/// i.e. `x[n] - x[n - w]`, with indices before the start clamped to the first
/// sample. A crossing happens where `|slope|` exceeds `threshold_fraction`
/// times a running maximum of `|slope|` that halves every `max_half_life_s`.
/// Each crossing is resolved to the sample within `±search_back_ms` that
/// deviates most from the local median; ties go to the sample nearest the
/// crossing. Detections closer than `refractory_ms` to the previous one are
/// dropped.
pub fn detect_r_peaks<T: Copy + Into<f64>>(
    channel: &[T],
    fs: f64,
    cfg: &DetectorConfig,
) -> Result<Vec<usize>, QrsError> {
    cfg.validate()?;
    if fs.is_nan() || fs <= 0.0 {
        return Err(QrsError::InvalidSamplingRate);
    }
    let w = cfg.slope_window;
    if channel.len() <= w {
        return Err(QrsError::EmptySignal {
            len: channel.len(),
            window: w,
        });
    }

    let x: Vec<f64> = channel.iter().map(|&v| v.into()).collect();
    let n = x.len();
    let decay = 0.5f64.powf(1.0 / (cfg.max_half_life_s * fs));
    let refractory = ms_to_samples(cfg.refractory_ms, fs).max(1);
    let half_width = ms_to_samples(cfg.search_back_ms, fs);

    let mut peaks: Vec<usize> = Vec::new();
    let mut running_max = 0.0f64;
    let mut blocked_until = 0usize;
    let mut scratch = Vec::with_capacity(2 * half_width + 1);

    for i in 0..n {
        let slope = (x[i] - x[i.saturating_sub(w)]).abs();
        running_max = (running_max * decay).max(slope);
        if i < blocked_until || slope <= 0.0 || slope <= cfg.threshold_fraction * running_max {
            continue;
        }

        let peak = locate_apex(&x, i, half_width, &mut scratch);
        match peaks.last() {
            Some(&last) if peak < last + refractory => {}
            _ => {
                peaks.push(peak);
                blocked_until = peak + refractory;
            }
        }
    }
    Ok(peaks)
}

/// Index in `[at - half_width, at + half_width]` (clipped to the signal) that
/// deviates most from the median of the edge-clamped window.
fn locate_apex(x: &[f64], at: usize, half_width: usize, scratch: &mut Vec<f64>) -> usize {
    let last = x.len() - 1;
    let clamp = |j: isize| x[j.clamp(0, last as isize) as usize];

    scratch.clear();
    let centre = at as isize;
    let hw = half_width as isize;
    scratch.extend((centre - hw..=centre + hw).map(clamp));
    let mid = scratch.len() / 2;
    let (_, median, _) = scratch.select_nth_unstable_by(mid, f64::total_cmp);
    let median = *median;

    let lo = at.saturating_sub(half_width);
    let hi = (at + half_width).min(last);
    let mut best = at;
    let mut best_dev = (x[at] - median).abs();
    for (j, v) in x.iter().enumerate().take(hi + 1).skip(lo) {
        let dev = (v - median).abs();
        let closer =
            j.abs_diff(at) < best.abs_diff(at) || (j.abs_diff(at) == best.abs_diff(at) && j < best);
        if dev > best_dev || (dev == best_dev && closer) {
            best = j;
            best_dev = dev;
        }
    }
    best
}
