//! End-to-end orchestration: build, deliver, split, write.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::beats::{build_from_dir, Dataset};
use crate::config::PipelineConfig;
use crate::transform::{
    deliver, export_binary, manifest_to_text, split, write_csv, TransformError,
};

/// Builds and delivers the dataset described by `cfg`. Records that fail are
/// listed in the manifest's skip list rather than aborting the run.
pub fn run(cfg: &PipelineConfig) -> Result<Dataset, TransformError> {
    let built = build_from_dir(&cfg.data_dir, &cfg.records, &cfg.build);
    let mut delivered = deliver(built, &cfg.transform)?;
    delivered.manifest.config_hash = cfg.hash();
    delivered.manifest.split_seed = cfg.split.seed;
    Ok(delivered)
}

/// Paths written by [`write_artifacts`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifacts {
    pub ecgb: PathBuf,
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

impl Artifacts {
    pub fn new(dir: &Path, stem: &str) -> Self {
        Artifacts {
            ecgb: dir.join(format!("{stem}.ecgb")),
            csv: dir.join(format!("{stem}.csv")),
            manifest: dir.join(format!("{stem}.manifest")),
        }
    }

    pub fn all(&self) -> [&Path; 3] {
        [&self.ecgb, &self.csv, &self.manifest]
    }
}

/// Writes the ECGB container, the CSV and the stand-alone manifest.
pub fn write_artifacts(
    dataset: &Dataset,
    dir: &Path,
    stem: &str,
    csv_header: bool,
) -> Result<Artifacts, TransformError> {
    fs::create_dir_all(dir)?;
    let paths = Artifacts::new(dir, stem);
    fs::write(&paths.ecgb, export_binary(dataset)?)?;
    write_csv(
        dataset,
        BufWriter::new(fs::File::create(&paths.csv)?),
        csv_header,
    )?;
    fs::write(&paths.manifest, manifest_to_text(&dataset.manifest, None))?;
    Ok(paths)
}

/// Splits with `cfg.split` and writes `<stem>_train.*` and `<stem>_test.*`.
pub fn write_split(
    dataset: &Dataset,
    cfg: &PipelineConfig,
    dir: &Path,
    stem: &str,
) -> Result<(Artifacts, Artifacts), TransformError> {
    let (train, test) = split(dataset, &cfg.split)?;
    let a = write_artifacts(&train, dir, &format!("{stem}_train"), cfg.output.csv_header)?;
    let b = write_artifacts(&test, dir, &format!("{stem}_test"), cfg.output.csv_header)?;
    Ok((a, b))
}
