//! Whole-pipeline configuration, loadable from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::beats::BuildConfig;
use crate::mitdb;
use crate::transform::{SplitSpec, TransformConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Parse {
        path: String,
        source: Box<toml::de::Error>,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Base name of the artifacts; `.ecgb`, `.csv` and `.manifest` are appended.
    pub stem: String,
    pub csv_header: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            stem: "dataset".into(),
            csv_header: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub data_dir: PathBuf,
    pub records: Vec<String>,
    pub build: BuildConfig,
    pub transform: TransformConfig,
    pub split: SplitSpec,
    pub output: OutputConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            data_dir: PathBuf::from("data"),
            records: mitdb::all_records(),
            build: BuildConfig::default(),
            transform: TransformConfig::default(),
            split: SplitSpec::default(),
            output: OutputConfig::default(),
        }
    }
}

/// The subset of settings that change the delivered beats.
#[derive(Serialize)]
struct HashedPart<'a> {
    records: &'a [String],
    build: &'a BuildConfig,
    transform: &'a TransformConfig,
    split: &'a SplitSpec,
}

impl PipelineConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_owned(),
            source: Box::new(e),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serialisable")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.transform.downsample_factor == 0 {
            return Err(ConfigError::Invalid(
                "downsample_factor must be at least 1".into(),
            ));
        }
        if self.build.global_size == 0 {
            return Err(ConfigError::Invalid(
                "global_size must be at least 1".into(),
            ));
        }
        if self.records.is_empty() {
            return Err(ConfigError::Invalid("no records selected".into()));
        }
        self.build
            .detector
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.split
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// SHA-256 over the settings that affect the output (paths excluded),
    /// as lowercase hex.
    pub fn hash(&self) -> String {
        let part = HashedPart {
            records: &self.records,
            build: &self.build,
            transform: &self.transform,
            split: &self.split,
        };
        let canonical = toml::to_string(&part).expect("config is always serialisable");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
