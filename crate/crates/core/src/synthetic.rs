//! Seeded synthetic ECG records for tests, benchmarks and demos.
//!
//! Beats are sums of Gaussian bumps (P, Q, R, S, T) placed at jittered RR
//! intervals. Ventricular beats get a wide, inverted complex, a short
//! coupling interval and a mild compensatory pause; `pause_every` inserts
//! long RR gaps that the outlier screen should catch.

use std::io;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::wfdb::{
    checksum, code_for_symbol, write_record, AnnotatedRecord, Annotation, RecordHeader, SignalSpec,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub name: String,
    pub sampling_rate: u32,
    pub seconds: f64,
    /// Mean RR interval in samples.
    pub mean_rr: usize,
    /// Uniform RR jitter, +/- samples.
    pub jitter: usize,
    /// Beat symbols, cycled.
    pub pattern: String,
    /// Every n-th interval is stretched 2.5x.
    pub pause_every: Option<usize>,
    /// Uniform noise amplitude in ADC units.
    pub noise: i16,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(name: &str) -> Self {
        SyntheticSpec {
            name: name.to_owned(),
            sampling_rate: 360,
            seconds: 60.0,
            mean_rr: 300,
            jitter: 25,
            pattern: "NNNNNNNVNNNANNNN".into(),
            pause_every: Some(37),
            noise: 4,
            seed: 1,
        }
    }
}

fn bump(t: f64, centre: f64, width: f64, amp: f64) -> f64 {
    let z = (t - centre) / width;
    amp * (-0.5 * z * z).exp()
}

fn beat_shape(t: f64, symbol: char) -> f64 {
    // t in seconds relative to the R peak.
    if symbol == 'V' {
        bump(t, 0.0, 0.03, -650.0) + bump(t, 0.09, 0.04, 180.0) + bump(t, 0.32, 0.07, -120.0)
    } else {
        bump(t, -0.2, 0.025, 40.0)
            + bump(t, -0.03, 0.01, -60.0)
            + bump(t, 0.0, 0.012, 420.0)
            + bump(t, 0.03, 0.01, -110.0)
            + bump(t, 0.25, 0.05, 80.0)
    }
}

/// Generates a two-channel record with a rhythm annotation at sample 0
/// followed by one beat annotation per R peak.
pub fn synthetic_record(spec: &SyntheticSpec) -> AnnotatedRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let fs = f64::from(spec.sampling_rate);
    let n = (spec.seconds * fs) as usize;
    let pattern: Vec<char> = spec.pattern.chars().collect();
    assert!(!pattern.is_empty(), "pattern must not be empty");

    let mut peaks: Vec<(usize, char)> = Vec::new();
    let mut pos = (0.5 * fs) as usize;
    let mut k = 0usize;
    while pos + (0.5 * fs) as usize <= n {
        let symbol = pattern[k % pattern.len()];
        peaks.push((pos, symbol));
        k += 1;
        let next = pattern[k % pattern.len()];
        let jitter = rng.random_range(0..=2 * spec.jitter) as f64 - spec.jitter as f64;
        let mut rr = spec.mean_rr as f64 + jitter;
        if next == 'V' {
            rr *= 0.85;
        } else if symbol == 'V' {
            rr *= 1.12;
        }
        if spec
            .pause_every
            .is_some_and(|p| p > 0 && k.is_multiple_of(p))
        {
            rr *= 2.5;
        }
        pos += rr.round().max(1.0) as usize;
    }

    let mut lead = vec![0i16; n];
    let reach = (0.6 * fs) as usize;
    let mut acc = vec![0f64; n];
    for &(p, symbol) in &peaks {
        for (i, a) in acc
            .iter_mut()
            .enumerate()
            .take((p + reach).min(n))
            .skip(p.saturating_sub(reach))
        {
            *a += beat_shape((i as f64 - p as f64) / fs, symbol);
        }
    }
    for (out, a) in lead.iter_mut().zip(&acc) {
        let noise = if spec.noise > 0 {
            f64::from(rng.random_range(-spec.noise..=spec.noise))
        } else {
            0.0
        };
        *out = (a + noise).round().clamp(-2048.0, 2047.0) as i16;
    }
    let second: Vec<i16> = lead.iter().map(|&v| (v / 2).saturating_add(10)).collect();

    let mut annotations =
        vec![Annotation::new(0, code_for_symbol('+').expect("rhythm code")).with_aux(b"(N")];
    annotations.extend(peaks.iter().map(|&(p, symbol)| {
        Annotation::new(
            p as u64,
            code_for_symbol(symbol).unwrap_or_else(|| panic!("unknown symbol {symbol:?}")),
        )
    }));

    let channels = vec![lead, second];
    let signals = channels
        .iter()
        .zip(["MLII", "V5"])
        .map(|(ch, description)| SignalSpec {
            file_name: format!("{}.dat", spec.name),
            format_code: 212,
            adc_gain: 200.0,
            adc_zero: 0,
            initial_value: i32::from(ch.first().copied().unwrap_or(0)),
            checksum: checksum(ch),
            description: description.into(),
        })
        .collect();
    AnnotatedRecord {
        header: RecordHeader {
            record_name: spec.name.clone(),
            n_signals: 2,
            sampling_rate: spec.sampling_rate,
            n_samples: n,
            signals,
        },
        channels,
        annotations,
    }
}

/// A small, varied corpus: each record gets its own seed, rate and rhythm.
pub fn synthetic_corpus(names: &[&str], seconds: f64) -> Vec<AnnotatedRecord> {
    const PATTERNS: [&str; 4] = [
        "NNNNNNNVNNNANNNN",
        "NNVNNNFNNNQNNNN",
        "LLLLLVLLLL",
        "//////f///",
    ];
    names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let mut spec = SyntheticSpec::new(name);
            spec.seconds = seconds;
            spec.seed = 1000 + i as u64;
            spec.mean_rr = 240 + 23 * (i % 5);
            spec.pattern = PATTERNS[i % PATTERNS.len()].into();
            spec.pause_every = Some(29 + 4 * i);
            synthetic_record(&spec)
        })
        .collect()
}

/// Writes [`synthetic_corpus`] into `dir` as `.hea`/`.dat`/`.atr` triples.
pub fn write_synthetic_corpus(
    dir: &Path,
    names: &[&str],
    seconds: f64,
) -> io::Result<Vec<AnnotatedRecord>> {
    let records = synthetic_corpus(names, seconds);
    for r in &records {
        write_record(dir, r)?;
    }
    Ok(records)
}
