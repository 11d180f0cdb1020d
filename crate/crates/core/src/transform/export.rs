//! CSV and ECGB writers.
//!
//! ECGB layout, all integers little-endian:
//!
//! ```text
//! "ECGB" | version u32 | n_beats u32 | beat_len u32 | n_classes u32
//! n_beats * beat_len f32, row-major
//! n_beats u8 labels (N=0 S=1 V=2 F=3 Q=4)
//! manifest_len u32 | manifest UTF-8
//! ```

use std::io::{self, Write};

use super::manifest::{manifest_from_text, manifest_to_text};
use super::TransformError;
use crate::beats::{Beat, BeatLabel, Dataset};

pub const ECGB_MAGIC: &[u8; 4] = b"ECGB";
pub const ECGB_VERSION: u32 = 1;
const HEADER_LEN: usize = 20;

/// Writes one row per beat: the samples, then the integer label.
pub fn write_csv<W: Write>(dataset: &Dataset, mut out: W, header: bool) -> io::Result<()> {
    if header {
        for i in 0..dataset.manifest.beat_len {
            write!(out, "x{i},")?;
        }
        writeln!(out, "label")?;
    }
    let mut row = String::new();
    for b in &dataset.beats {
        row.clear();
        for v in &b.samples {
            // Display prints the shortest text that parses back to the same f32.
            row.push_str(&v.to_string());
            row.push(',');
        }
        row.push_str(&b.label.code().to_string());
        writeln!(out, "{row}")?;
    }
    out.flush()
}

pub fn export_csv(dataset: &Dataset, header: bool) -> String {
    let mut buf = Vec::new();
    write_csv(dataset, &mut buf, header).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is ASCII")
}

fn u32_field(name: &str, v: usize) -> Result<u32, TransformError> {
    u32::try_from(v).map_err(|_| TransformError::CountMismatch(format!("{name} {v} exceeds u32")))
}

pub fn export_binary(dataset: &Dataset) -> Result<Vec<u8>, TransformError> {
    let beat_len = dataset.manifest.beat_len;
    if let Some(b) = dataset.beats.iter().find(|b| b.samples.len() != beat_len) {
        return Err(TransformError::CountMismatch(format!(
            "beat at {} of record {} has {} samples, manifest says {beat_len}",
            b.r_index,
            b.record,
            b.samples.len()
        )));
    }
    if let Some(b) = dataset
        .beats
        .iter()
        .find(|b| b.record.contains([',', '\n']))
    {
        return Err(TransformError::CountMismatch(format!(
            "record name {:?} cannot be stored",
            b.record
        )));
    }
    let manifest = manifest_to_text(&dataset.manifest, Some(&dataset.beats));
    let n = dataset.beats.len();
    let mut out = Vec::with_capacity(HEADER_LEN + n * (beat_len * 4 + 1) + 4 + manifest.len());
    out.extend_from_slice(ECGB_MAGIC);
    out.extend_from_slice(&ECGB_VERSION.to_le_bytes());
    out.extend_from_slice(&u32_field("n_beats", n)?.to_le_bytes());
    out.extend_from_slice(&u32_field("beat_len", beat_len)?.to_le_bytes());
    out.extend_from_slice(&(BeatLabel::ALL.len() as u32).to_le_bytes());
    for b in &dataset.beats {
        for v in &b.samples {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out.extend(dataset.beats.iter().map(|b| b.label.code()));
    out.extend_from_slice(&u32_field("manifest length", manifest.len())?.to_le_bytes());
    out.extend_from_slice(manifest.as_bytes());
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], TransformError> {
        let needed = self.pos.saturating_add(n);
        if needed > self.bytes.len() {
            return Err(TransformError::TruncatedContainer {
                needed,
                found: self.bytes.len(),
            });
        }
        let s = &self.bytes[self.pos..needed];
        self.pos = needed;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, TransformError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }
}

pub fn import_binary(bytes: &[u8]) -> Result<Dataset, TransformError> {
    let mut r = Reader { bytes, pos: 0 };
    if bytes.len() >= 4 && &bytes[..4] != ECGB_MAGIC {
        return Err(TransformError::BadMagic);
    }
    r.take(4)?;
    let version = r.u32()?;
    if version != ECGB_VERSION {
        return Err(TransformError::UnsupportedVersion(version));
    }
    let n = r.u32()? as usize;
    let beat_len = r.u32()? as usize;
    let n_classes = r.u32()? as usize;
    if n_classes != BeatLabel::ALL.len() {
        return Err(TransformError::CountMismatch(format!(
            "container declares {n_classes} classes, expected {}",
            BeatLabel::ALL.len()
        )));
    }
    let values = n
        .checked_mul(beat_len)
        .and_then(|v| v.checked_mul(4))
        .ok_or_else(|| TransformError::CountMismatch("declared sizes overflow".into()))?;
    let matrix = r.take(values)?;
    let labels = r.take(n)?;
    let manifest_len = r.u32()? as usize;
    let text = r.take(manifest_len)?;
    if r.pos != bytes.len() {
        return Err(TransformError::CountMismatch(format!(
            "{} trailing bytes after the manifest",
            bytes.len() - r.pos
        )));
    }
    let text = std::str::from_utf8(text)
        .map_err(|e| TransformError::CountMismatch(format!("manifest is not UTF-8: {e}")))?;
    let (manifest, provenance) = manifest_from_text(text)?;
    if provenance.len() != n {
        return Err(TransformError::CountMismatch(format!(
            "header declares {n} beats, manifest describes {}",
            provenance.len()
        )));
    }
    if manifest.beat_len != beat_len {
        return Err(TransformError::CountMismatch(format!(
            "header beat_len {beat_len}, manifest beat_len {}",
            manifest.beat_len
        )));
    }

    let mut beats = Vec::with_capacity(n);
    let row_bytes = beat_len * 4;
    for (i, (&code, p)) in labels.iter().zip(provenance).enumerate() {
        let row = &matrix[i * row_bytes..(i + 1) * row_bytes];
        let label = BeatLabel::from_code(code).ok_or_else(|| {
            TransformError::CountMismatch(format!("label code {code} out of range"))
        })?;
        if p.span_start + p.span_len > beat_len {
            return Err(TransformError::CountMismatch(format!(
                "span {}+{} exceeds beat length {beat_len}",
                p.span_start, p.span_len
            )));
        }
        beats.push(Beat {
            samples: row
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect(),
            label,
            record: p.record,
            r_index: p.r_index,
            raw_length: p.raw_length,
            window_id: p.window_id,
            span_start: p.span_start,
            span_len: p.span_len,
        });
    }
    let dataset = Dataset { beats, manifest };
    if dataset.class_counts() != dataset.manifest.class_counts {
        return Err(TransformError::CountMismatch(
            "labels disagree with the manifest class counts".into(),
        ));
    }
    Ok(dataset)
}
