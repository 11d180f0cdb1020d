use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use ecgforge_core::wfdb::{load_record, verify_checksums};
use ecgforge_core::PipelineConfig;

use crate::args::FetchArgs;
use crate::Status;

const EXTENSIONS: [&str; 3] = ["hea", "dat", "atr"];

fn download(url: &str, dest: &Path) -> anyhow::Result<()> {
    let mut resp = ureq::get(url).call().map_err(|e| anyhow!("{url}: {e}"))?;
    let bytes = resp
        .body_mut()
        .with_config()
        .limit(64 * 1024 * 1024)
        .read_to_vec()
        .map_err(|e| anyhow!("{url}: {e}"))?;
    let partial = dest.with_extension("part");
    fs::write(&partial, bytes).with_context(|| format!("writing {}", partial.display()))?;
    fs::rename(&partial, dest).with_context(|| format!("writing {}", dest.display()))?;
    Ok(())
}

/// Loads a record and checks every channel checksum, naming the record on
/// failure.
fn verify(dir: &Path, name: &str) -> anyhow::Result<()> {
    let rec = load_record(dir, name)?;
    let report = verify_checksums(&rec);
    if let Some(c) = report.failures().next() {
        bail!(
            "ChecksumMismatch: record {name} channel {} (header {}, computed {})",
            c.channel,
            c.expected,
            c.computed
        );
    }
    Ok(())
}

pub fn run(cfg: &PipelineConfig, a: &FetchArgs, out: &mut impl Write) -> anyhow::Result<Status> {
    let dir = &cfg.data_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let names = if a.records.is_empty() {
        cfg.records.clone()
    } else {
        a.records.clone()
    };
    let base = a.base_url.trim_end_matches('/');

    let mut downloaded = 0;
    for name in &names {
        let mut fetched_any = false;
        for ext in EXTENSIONS {
            let dest = dir.join(format!("{name}.{ext}"));
            if dest.exists() && !a.force {
                continue;
            }
            let url = format!("{base}/{name}.{ext}");
            log::info!("downloading {url}");
            download(&url, &dest).with_context(|| {
                format!(
                    "network error; download {base}/{name}.{{hea,dat,atr}} by hand into {}",
                    dir.display()
                )
            })?;
            downloaded += 1;
            fetched_any = true;
        }
        verify(dir, name).with_context(|| {
            if fetched_any {
                "freshly downloaded files failed verification".to_owned()
            } else {
                "existing files failed verification; re-run with --force".to_owned()
            }
        })?;
        if fetched_any {
            writeln!(out, "fetched={name}")?;
        }
    }
    if downloaded == 0 {
        writeln!(out, "up to date ({} records verified)", names.len())?;
    } else {
        writeln!(out, "downloaded={downloaded} files")?;
    }
    Ok(Status::Ok)
}
