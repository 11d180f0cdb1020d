use crate::wfdb::{is_beat_code, Annotation};

/// Interval between two consecutive R peaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RrInterval {
    pub from_index: usize,
    pub to_index: usize,
    pub length: usize,
}

/// R-peak positions and the intervals between them.
///
/// Straight out of [`build_rr_series`] there is one interval per pair of
/// consecutive peaks. After outlier removal both lists are thinned
/// independently, so that correspondence no longer holds.
#[derive(Debug, Clone, PartialEq)]
pub struct RrSeries {
    pub r_peaks: Vec<usize>,
    pub intervals: Vec<RrInterval>,
    pub sampling_rate: u32,
}

impl RrSeries {
    pub fn lengths(&self) -> Vec<f64> {
        self.intervals.iter().map(|i| i.length as f64).collect()
    }

    /// Interval lengths in seconds.
    pub fn seconds(&self) -> Vec<f64> {
        let fs = f64::from(self.sampling_rate);
        self.intervals
            .iter()
            .map(|i| i.length as f64 / fs)
            .collect()
    }
}

/// Sorted, distinct sample positions of beat annotations.
pub fn r_peaks_from_annotations(annotations: &[Annotation]) -> Vec<usize> {
    let mut peaks: Vec<usize> = annotations
        .iter()
        .filter(|a| is_beat_code(a.code))
        .map(|a| a.sample_index as usize)
        .collect();
    peaks.sort_unstable();
    peaks.dedup();
    peaks
}

/// Successive differences of strictly increasing peaks. Fewer than two
/// peaks give an empty interval list.
pub fn build_rr_series(r_peaks: &[usize], fs: u32) -> RrSeries {
    debug_assert!(r_peaks.windows(2).all(|w| w[0] < w[1]));
    let intervals = r_peaks
        .windows(2)
        .map(|w| RrInterval {
            from_index: w[0],
            to_index: w[1],
            length: w[1] - w[0],
        })
        .collect();
    RrSeries {
        r_peaks: r_peaks.to_vec(),
        intervals,
        sampling_rate: fs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wfdb::code_for_symbol;

    fn ann(t: u64, sym: char) -> Annotation {
        Annotation::new(t, code_for_symbol(sym).unwrap())
    }

    #[test]
    fn excludes_non_beats() {
        let anns = [ann(1000, 'N'), ann(1500, '+'), ann(1800, 'V')];
        assert_eq!(r_peaks_from_annotations(&anns), vec![1000, 1800]);
        assert!(r_peaks_from_annotations(&[]).is_empty());
    }

    #[test]
    fn successive_differences() {
        let s = build_rr_series(&[100, 400, 710], 360);
        let lengths: Vec<usize> = s.intervals.iter().map(|i| i.length).collect();
        assert_eq!(lengths, vec![300, 310]);
        assert_eq!(s.intervals[1].from_index, 400);
        assert_eq!(s.intervals[1].to_index, 710);
        assert!((s.seconds()[0] - 300.0 / 360.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate() {
        assert!(build_rr_series(&[5], 360).intervals.is_empty());
        assert!(build_rr_series(&[], 360).intervals.is_empty());
    }
}
