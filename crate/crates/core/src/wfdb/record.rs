use std::fs;
use std::path::{Path, PathBuf};

use super::{
    decode_format212, encode_annotations, encode_format212, parse_annotations, parse_header,
    Annotation, RecordHeader, WfdbError,
};

/// A decoded record: header, per-channel samples in adu, and annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedRecord {
    pub header: RecordHeader,
    pub channels: Vec<Vec<i16>>,
    pub annotations: Vec<Annotation>,
}

impl AnnotatedRecord {
    pub fn name(&self) -> &str {
        &self.header.record_name
    }

    pub fn sampling_rate(&self) -> u32 {
        self.header.sampling_rate
    }

    pub fn n_samples(&self) -> usize {
        self.header.n_samples
    }
}

/// File locations of a record inside a data directory.
#[derive(Debug, Clone)]
pub struct RecordPaths {
    pub header: PathBuf,
    pub annotations: PathBuf,
    pub dir: PathBuf,
}

impl RecordPaths {
    pub fn new(dir: impl AsRef<Path>, record: &str) -> Self {
        let dir = dir.as_ref();
        RecordPaths {
            header: dir.join(format!("{record}.hea")),
            annotations: dir.join(format!("{record}.atr")),
            dir: dir.to_path_buf(),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, WfdbError> {
    fs::read(path).map_err(|source| WfdbError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads `<record>.hea`, the signal file it names, and `<record>.atr`.
pub fn load_record(dir: impl AsRef<Path>, record: &str) -> Result<AnnotatedRecord, WfdbError> {
    let paths = RecordPaths::new(dir, record);
    let wrap = |e: WfdbError| e.in_record(record);

    let text = read(&paths.header).map_err(wrap)?;
    let header = parse_header(&String::from_utf8_lossy(&text)).map_err(wrap)?;

    // MIT-BIH keeps every signal of a record interleaved in one file.
    let file_name = &header.signals[0].file_name;
    if header.signals.iter().any(|s| &s.file_name != file_name) {
        return Err(wrap(WfdbError::MalformedHeader(
            "signals spread over several files are not supported".into(),
        )));
    }
    let bytes = read(&paths.dir.join(file_name)).map_err(wrap)?;
    let channels = decode_format212(&bytes, header.n_samples, header.n_signals).map_err(wrap)?;

    let annotations = parse_annotations(&read(&paths.annotations).map_err(wrap)?).map_err(wrap)?;

    Ok(AnnotatedRecord {
        header,
        channels,
        annotations,
    })
}

/// Loads several records in parallel, keeping the input order.
pub fn load_records(
    dir: impl AsRef<Path> + Sync,
    names: &[String],
) -> Vec<(String, Result<AnnotatedRecord, WfdbError>)> {
    use rayon::prelude::*;
    names
        .par_iter()
        .map(|n| (n.clone(), load_record(&dir, n)))
        .collect()
}

/// Writes a record in the layout [`load_record`] reads. Used to build
/// fixtures; the header's checksums and initial values are taken as given.
pub fn write_record(dir: impl AsRef<Path>, record: &AnnotatedRecord) -> std::io::Result<()> {
    let dir = dir.as_ref();
    let h = &record.header;
    let mut text = format!(
        "{} {} {} {}\n",
        h.record_name, h.n_signals, h.sampling_rate, h.n_samples
    );
    for s in &h.signals {
        text.push_str(&format!(
            "{} {} {} 11 {} {} {} 0 {}\n",
            s.file_name,
            s.format_code,
            s.adc_gain,
            s.adc_zero,
            s.initial_value,
            s.checksum,
            s.description
        ));
    }
    fs::write(dir.join(format!("{}.hea", h.record_name)), text)?;
    fs::write(
        dir.join(&h.signals[0].file_name),
        encode_format212(&record.channels),
    )?;
    fs::write(
        dir.join(format!("{}.atr", h.record_name)),
        encode_annotations(&record.annotations),
    )
}

/// Signed 16-bit wrapping sum of a channel, as stored in headers.
pub fn checksum(samples: &[i16]) -> i16 {
    samples.iter().fold(0i16, |acc, &s| acc.wrapping_add(s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelCheck {
    pub channel: usize,
    pub expected: i16,
    pub computed: i16,
    pub samples: usize,
}

impl ChannelCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.computed
    }
}

/// Outcome of [`verify_checksums`]. A failed channel leaves the record usable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChecksumReport {
    pub record: String,
    pub channels: Vec<ChannelCheck>,
}

impl ChecksumReport {
    pub fn all_passed(&self) -> bool {
        self.channels.iter().all(ChannelCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ChannelCheck> {
        self.channels.iter().filter(|c| !c.passed())
    }
}

pub fn verify_checksums(record: &AnnotatedRecord) -> ChecksumReport {
    let channels = record
        .channels
        .iter()
        .zip(&record.header.signals)
        .enumerate()
        .map(|(channel, (samples, spec))| ChannelCheck {
            channel,
            expected: spec.checksum,
            computed: checksum(samples),
            samples: samples.len(),
        })
        .collect();
    ChecksumReport {
        record: record.header.record_name.clone(),
        channels,
    }
}
