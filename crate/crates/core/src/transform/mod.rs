//! Delivery-side transforms: downsampling, per-beat z-scoring, the train/test
//! split and the on-disk formats.

mod export;
mod manifest;
mod normalize;
mod resample;
mod split;

pub use export::{export_binary, export_csv, import_binary, write_csv, ECGB_MAGIC, ECGB_VERSION};
pub use manifest::{manifest_from_text, manifest_to_text, BeatProvenance};
pub use normalize::{mean_std, zscore};
pub use resample::{downsample, downsample_beat};
pub use split::{split, stratified_quota, SplitSpec};

use thiserror::Error;

use crate::beats::{BeatLabel, Dataset, Normalization};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("downsampling factor must be at least 1")]
    ZeroFactor,
    #[error("beat at sample {r_index} of record {record} has a constant span")]
    ZeroVariance { record: String, r_index: usize },
    #[error("train fraction {0} outside (0, 1)")]
    InvalidSplit(f64),
    #[error("cannot split an empty dataset")]
    EmptyDataset,
    #[error("class {label} has {members} member(s); stratified split needs at least 2")]
    ClassTooSmall { label: BeatLabel, members: usize },
    #[error("container truncated: needed {needed} bytes, found {found}")]
    TruncatedContainer { needed: usize, found: usize },
    #[error("not an ECGB container")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u32),
    #[error("count mismatch: {0}")]
    CountMismatch(String),
    #[error("invalid manifest line {line}: {reason}")]
    InvalidManifest { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Settings applied between the builder and the exporters.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct TransformConfig {
    pub downsample_factor: usize,
    pub anti_alias: bool,
    pub normalization: Normalization,
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig {
            downsample_factor: 3,
            anti_alias: false,
            normalization: Normalization::Zscore,
        }
    }
}

/// Downsamples then normalises every beat, updating the manifest. Beats with
/// a constant span come out as all zeros and are counted in
/// `zero_variance_beats`.
pub fn deliver(mut dataset: Dataset, cfg: &TransformConfig) -> Result<Dataset, TransformError> {
    use rayon::prelude::*;

    if cfg.downsample_factor == 0 {
        return Err(TransformError::ZeroFactor);
    }
    let normalization = cfg.normalization;
    let results: Vec<(crate::beats::Beat, bool)> = dataset
        .beats
        .par_iter()
        .map(|b| -> Result<_, TransformError> {
            let down = downsample_beat(b, cfg.downsample_factor, cfg.anti_alias)?;
            match normalization {
                Normalization::None => Ok((down, false)),
                Normalization::Zscore => match zscore(&down) {
                    Ok(z) => Ok((z, false)),
                    Err(TransformError::ZeroVariance { .. }) => {
                        let mut flat = down;
                        flat.samples.iter_mut().for_each(|v| *v = 0.0);
                        Ok((flat, true))
                    }
                    Err(e) => Err(e),
                },
            }
        })
        .collect::<Result<_, _>>()?;

    let mut zero_variance = 0;
    dataset.beats = results
        .into_iter()
        .map(|(b, flagged)| {
            if flagged {
                log::warn!(
                    "record {} beat at {}: constant span, emitted as zeros",
                    b.record,
                    b.r_index
                );
                zero_variance += 1;
            }
            b
        })
        .collect();

    let m = &mut dataset.manifest;
    m.downsample_factor = cfg.downsample_factor;
    m.anti_alias = cfg.anti_alias;
    m.normalization = normalization;
    m.beat_len = m.global_size.div_ceil(cfg.downsample_factor);
    m.zero_variance_beats = zero_variance;
    Ok(dataset)
}
