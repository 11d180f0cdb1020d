//! Facts about the MIT-BIH Arrhythmia Database used for sanity checks.

use crate::beats::{BeatLabel, ClassCounts};

/// The 48 records of the archive, in name order.
pub const RECORDS: [&str; 48] = [
    "100", "101", "102", "103", "104", "105", "106", "107", "108", "109", "111", "112", "113",
    "114", "115", "116", "117", "118", "119", "121", "122", "123", "124", "200", "201", "202",
    "203", "205", "207", "208", "209", "210", "212", "213", "214", "215", "217", "219", "220",
    "221", "222", "223", "228", "230", "231", "232", "233", "234",
];

/// Default download location.
pub const ARCHIVE_URL: &str = "https://physionet.org/files/mitdb/1.0.0";

pub const SAMPLING_RATE: u32 = 360;

/// Published per-class beat totals before any filtering (N, S, V, F, Q).
pub const CLASS_TOTALS: ClassCounts = ClassCounts([90_631, 2_781, 7_236, 803, 8_043]);

/// Allowed relative deviation from [`CLASS_TOTALS`], per class.
pub const CLASS_TOLERANCE: f64 = 0.005;

/// Reported RR outlier removals over the whole archive, with the accepted band.
pub const UPPER_REMOVED_BAND: (usize, usize) = (3_900, 6_500);
pub const LOWER_REMOVED_BAND: (usize, usize) = (900, 1_500);

/// Median beat length (samples) that many records are said to exceed.
pub const MEDIAN_LENGTH_THRESHOLD: f64 = 260.0;

pub fn all_records() -> Vec<String> {
    RECORDS.iter().map(|s| (*s).to_owned()).collect()
}

/// Per-class comparison against [`CLASS_TOTALS`]. Each entry holds the
/// label, the observed and expected counts, and whether it is within the
/// tolerance.
pub fn check_class_counts(observed: &ClassCounts) -> Vec<(BeatLabel, usize, usize, bool)> {
    BeatLabel::ALL
        .iter()
        .map(|&l| {
            let want = CLASS_TOTALS.get(l);
            let got = observed.get(l);
            let ok = (got as f64 - want as f64).abs() <= CLASS_TOLERANCE * want as f64;
            (l, got, want, ok)
        })
        .collect()
}

/// Band for a built dataset, where outlier removal has already thinned the
/// beats: total within this fraction of the published total...
pub const BUILT_TOTAL_TOLERANCE: f64 = 0.06;
/// ...and each class share within this many percentage points.
pub const BUILT_SHARE_TOLERANCE_PP: f64 = 1.5;

/// Checks a built dataset's class counts. Returns human-readable failures;
/// empty means inside the band.
pub fn check_built_counts(observed: &ClassCounts) -> Vec<String> {
    let mut failures = Vec::new();
    let want = CLASS_TOTALS.total() as f64;
    let got = observed.total() as f64;
    if (got - want).abs() > BUILT_TOTAL_TOLERANCE * want {
        failures.push(format!(
            "total {got} outside {want} +/- {:.0}%",
            BUILT_TOTAL_TOLERANCE * 100.0
        ));
    }
    let expected = CLASS_TOTALS.percentages();
    for (l, (g, w)) in BeatLabel::ALL
        .iter()
        .zip(observed.percentages().into_iter().zip(expected))
    {
        if (g - w).abs() > BUILT_SHARE_TOLERANCE_PP {
            failures.push(format!("class {l} share {g:.2}% vs {w:.2}%"));
        }
    }
    failures
}
