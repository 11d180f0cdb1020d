//! Shared fixtures for the benchmarks.

use ecgforge_core::synthetic::{synthetic_record, SyntheticSpec};
use ecgforge_core::AnnotatedRecord;

/// A record of the given length, in minutes, with the default rhythm.
pub fn fixture(minutes: f64) -> AnnotatedRecord {
    let mut spec = SyntheticSpec::new("bench");
    spec.seconds = minutes * 60.0;
    synthetic_record(&spec)
}
