//! Reader for MIT-BIH records stored in the WFDB layout.
//!
//! A record is three files sharing a name: an ASCII `.hea` header, a `.dat`
//! signal file packed in format 212 and a `.atr` file holding the reference
//! beat annotations in the MIT annotation format. Only what MIT-BIH needs is
//! supported: single-segment records whose signals are all format 212.

mod annotation;
mod codes;
mod header;
mod record;
mod signal;

pub use annotation::{encode_annotations, parse_annotations, Annotation};
pub use codes::{code_for_symbol, is_beat_code, symbol_for_code, AnnotationCode};
pub use header::{parse_header, RecordHeader, SignalSpec};
pub use record::{
    checksum, load_record, load_records, verify_checksums, write_record, AnnotatedRecord,
    ChannelCheck, ChecksumReport, RecordPaths,
};
pub use signal::{decode_format212, encode_format212, format212_len};

use thiserror::Error;

/// Errors raised while reading WFDB files.
#[derive(Debug, Error)]
pub enum WfdbError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported signal format {format} for signal {signal} (only 212 is read)")]
    UnsupportedFormat { signal: usize, format: u32 },
    #[error("signal file truncated: need {needed} bytes, found {found}")]
    TruncatedFile { needed: usize, found: usize },
    #[error("annotation stream ends without the EOF word")]
    MissingEof,
    #[error("aux payload of {len} bytes at offset {offset} runs past the end of the file")]
    AuxOverrun { offset: usize, len: usize },
    #[error("SKIP at byte offset {offset} moves time backwards")]
    InvalidSkip { offset: usize },
    #[error("unknown annotation code {code} at byte offset {offset}")]
    UnknownCode { code: u8, offset: usize },
    #[error("record {record}: {source}")]
    Record {
        record: String,
        #[source]
        source: Box<WfdbError>,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl WfdbError {
    pub(crate) fn in_record(self, record: &str) -> Self {
        WfdbError::Record {
            record: record.to_owned(),
            source: Box::new(self),
        }
    }
}
