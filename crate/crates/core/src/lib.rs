//! ECG heartbeat dataset construction from the MIT-BIH Arrhythmia Database.
//!
//! [`wfdb`] reads records, [`qrs`] locates R peaks, [`beats`] turns them into
//! labelled fixed-length beats and [`transform`] prepares and serialises the
//! result. [`pipeline`] ties the stages together.

pub mod beats;
pub mod config;
pub mod mitdb;
pub mod pipeline;
pub mod qrs;
pub mod report;
pub mod synthetic;
pub mod transform;
pub mod wfdb;

pub use beats::{Beat, BeatLabel, BuildConfig, BuildError, ClassCounts, Dataset, DatasetManifest};
pub use config::{ConfigError, PipelineConfig};
pub use qrs::{DetectorConfig, PeakSource, QrsError};
pub use transform::{SplitSpec, TransformConfig, TransformError};
pub use wfdb::{AnnotatedRecord, WfdbError};
