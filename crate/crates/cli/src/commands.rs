use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use ecgforge_core::beats::Accounting;
use ecgforge_core::pipeline::{self, Artifacts};
use ecgforge_core::qrs::{detect_r_peaks, match_detections, r_peaks_from_annotations};
use ecgforge_core::report::{boxplot_svg, StatsReport};
use ecgforge_core::transform::{export_binary, manifest_to_text, split, write_csv};
use ecgforge_core::wfdb::{load_records, verify_checksums, AnnotatedRecord};
use ecgforge_core::{mitdb, Dataset, PipelineConfig};

use crate::args::{BuildArgs, ExportArgs, Format, PipelineArgs, QrsArgs, StatsArgs};
use crate::{Status, UsageError};

fn pick_records(cfg: &mut PipelineConfig, names: &[String]) {
    if !names.is_empty() {
        let mut names = names.to_vec();
        names.sort();
        names.dedup();
        cfg.records = names;
    }
}

fn validate(cfg: &PipelineConfig) -> anyhow::Result<()> {
    cfg.validate().map_err(|e| UsageError(e.to_string()).into())
}

/// Loads every selected record, failing on the first that cannot be read.
fn load_all(cfg: &PipelineConfig) -> anyhow::Result<Vec<AnnotatedRecord>> {
    let mut records = Vec::with_capacity(cfg.records.len());
    for (name, loaded) in load_records(&cfg.data_dir, &cfg.records) {
        let rec = loaded.with_context(|| {
            format!(
                "loading record {name} from {} (run `ecgforge fetch` or set --data-dir)",
                cfg.data_dir.display()
            )
        })?;
        records.push(rec);
    }
    Ok(records)
}

/// Warns about checksum failures; true when all channels verified.
fn checksums_ok(records: &[AnnotatedRecord], out: &mut impl Write) -> anyhow::Result<bool> {
    let mut ok = true;
    for r in records {
        let report = verify_checksums(r);
        for c in report.failures() {
            log::warn!(
                "record {} channel {}: checksum {} in header, {} computed",
                r.name(),
                c.channel,
                c.expected,
                c.computed
            );
            writeln!(out, "checksum_mismatch={},{}", r.name(), c.channel)?;
            ok = false;
        }
    }
    Ok(ok)
}

pub fn qrs(mut cfg: PipelineConfig, a: &QrsArgs, out: &mut impl Write) -> anyhow::Result<Status> {
    pick_records(&mut cfg, &a.records);
    if let Some(c) = a.channel {
        cfg.build.channel = c;
    }
    if let Some(t) = a.tolerance_ms {
        cfg.build.match_tolerance_ms = t;
    }
    validate(&cfg)?;
    let records = load_all(&cfg)?;

    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    let mut passed = true;
    for rec in &records {
        let Some(channel) = rec.channels.get(cfg.build.channel) else {
            bail!(UsageError(format!(
                "record {} has no channel {}",
                rec.name(),
                cfg.build.channel
            )));
        };
        let fs = f64::from(rec.sampling_rate());
        let start = Instant::now();
        let detections = detect_r_peaks(channel, fs, &cfg.build.detector)
            .with_context(|| format!("record {}", rec.name()))?;
        let elapsed = start.elapsed().as_secs_f64();
        let reference = r_peaks_from_annotations(&rec.annotations);
        let m = match_detections(&detections, &reference, cfg.build.match_tolerance_ms, fs);
        tp += m.true_pos;
        fp += m.false_pos;
        fn_ += m.false_neg;

        writeln!(out, "# record {}", rec.name())?;
        writeln!(out, "reference={}", reference.len())?;
        writeln!(out, "detections={}", detections.len())?;
        writeln!(out, "true_pos={}", m.true_pos)?;
        writeln!(out, "false_pos={}", m.false_pos)?;
        writeln!(out, "false_neg={}", m.false_neg)?;
        writeln!(out, "sensitivity={:.4}", m.sensitivity)?;
        writeln!(out, "ppv={:.4}", m.ppv)?;
        writeln!(out, "seconds={elapsed:.3}")?;
        if let Some(min) = a.check {
            let ok = m.sensitivity >= min && m.ppv >= min;
            writeln!(out, "check={}", if ok { "pass" } else { "fail" })?;
            passed &= ok;
        }
        writeln!(out)?;
    }
    writeln!(out, "# total")?;
    writeln!(out, "true_pos={tp}")?;
    writeln!(out, "false_pos={fp}")?;
    writeln!(out, "false_neg={fn_}")?;
    Ok(if passed {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

pub fn stats(
    mut cfg: PipelineConfig,
    a: &StatsArgs,
    out: &mut impl Write,
) -> anyhow::Result<Status> {
    pick_records(&mut cfg, &a.records);
    validate(&cfg)?;
    let records = load_all(&cfg)?;
    let report = StatsReport::compute(&records);

    let mut text = Vec::new();
    let checksums = checksums_ok(&records, &mut text)?;
    text.extend_from_slice(report.render().as_bytes());
    let mut passed = true;
    if a.check {
        writeln!(text)?;
        writeln!(text, "# check")?;
        for (label, got, want, ok) in mitdb::check_class_counts(&report.class_totals()) {
            writeln!(
                text,
                "class.{label}={} got={got} want={want}",
                if ok { "pass" } else { "fail" }
            )?;
            passed &= ok;
        }
    }
    match &a.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
        }
        None => out.write_all(&text)?,
    }
    if let Some(path) = &a.boxplot {
        fs::write(path, boxplot_svg(&report))
            .with_context(|| format!("writing {}", path.display()))?;
        log::info!("box plot written to {}", path.display());
    }
    Ok(if !checksums {
        Status::DataProblem
    } else if passed {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

fn apply(cfg: &mut PipelineConfig, a: &PipelineArgs) {
    pick_records(cfg, &a.records);
    if let Some(c) = a.channel {
        cfg.build.channel = c;
    }
    if let Some(d) = a.detector {
        cfg.build.peak_source = d.into();
    }
    if let Some(g) = a.global_size {
        cfg.build.global_size = g;
    }
    cfg.build.clip_oversize |= a.clip_oversize;
    if let Some(f) = a.downsample {
        cfg.transform.downsample_factor = f;
    }
    cfg.transform.anti_alias |= a.anti_alias;
    if let Some(n) = a.normalize {
        cfg.transform.normalization = n.into();
    }
    if let Some(d) = &a.out_dir {
        cfg.output.dir = d.clone();
    }
    if let Some(s) = &a.stem {
        cfg.output.stem = s.clone();
    }
    cfg.output.csv_header |= a.header;
}

/// Prints the per-record accounting; false when a record does not balance.
fn print_summary(dataset: &Dataset, out: &mut impl Write) -> anyhow::Result<bool> {
    let m = &dataset.manifest;
    let mut balanced = true;
    let mut total = Accounting::default();
    for (name, acc) in &m.accounting {
        writeln!(
            out,
            "accounting.{name}=total:{} emitted:{} outlier_dropped:{} non_beat:{} unmapped:{} edge_skips:{} unlabeled:{} duplicates:{}{}",
            acc.total,
            acc.emitted,
            acc.outlier_dropped,
            acc.non_beat,
            acc.unmapped,
            acc.edge_skips,
            acc.unlabeled,
            acc.duplicates,
            if acc.balances() { "" } else { " UNBALANCED" }
        )?;
        balanced &= acc.balances();
        total += *acc;
    }
    writeln!(out, "accounting.total={}", total.total)?;
    writeln!(out, "accounting.emitted={}", total.emitted)?;
    writeln!(out, "accounting.balanced={balanced}")?;
    let o = m.outlier_report.total();
    writeln!(out, "outliers.upper_removed={}", o.upper_removed)?;
    writeln!(out, "outliers.lower_removed={}", o.lower_removed)?;
    writeln!(out, "beats={}", dataset.len())?;
    writeln!(out, "beat_len={}", m.beat_len)?;
    for l in ecgforge_core::BeatLabel::ALL {
        writeln!(out, "class.{l}={}", m.class_counts.get(l))?;
    }
    writeln!(out, "max_window_size={}", m.max_window_size)?;
    writeln!(out, "zero_variance_beats={}", m.zero_variance_beats)?;
    for (name, why) in &m.skipped {
        writeln!(out, "skipped.{name}={why}")?;
    }
    Ok(balanced)
}

fn built(cfg: &PipelineConfig, out: &mut impl Write) -> anyhow::Result<(Dataset, bool)> {
    validate(cfg)?;
    if !cfg.data_dir.is_dir() {
        bail!(
            "data directory {} does not exist (run `ecgforge fetch` or set --data-dir)",
            cfg.data_dir.display()
        );
    }
    let dataset = pipeline::run(cfg)?;
    let healthy = print_summary(&dataset, out)? && dataset.manifest.skipped.is_empty();
    Ok((dataset, healthy))
}

pub fn build(
    mut cfg: PipelineConfig,
    a: &BuildArgs,
    out: &mut impl Write,
) -> anyhow::Result<Status> {
    apply(&mut cfg, &a.pipeline);
    let (dataset, healthy) = built(&cfg, out)?;
    let paths = pipeline::write_artifacts(
        &dataset,
        &cfg.output.dir,
        &cfg.output.stem,
        cfg.output.csv_header,
    )
    .with_context(|| format!("writing artifacts to {}", cfg.output.dir.display()))?;
    for p in paths.all() {
        writeln!(out, "wrote={}", p.display())?;
    }
    if !healthy {
        return Ok(Status::DataProblem);
    }
    if a.check {
        let failures = mitdb::check_built_counts(&dataset.manifest.class_counts);
        for f in &failures {
            writeln!(out, "check.fail={f}")?;
        }
        if !failures.is_empty() {
            return Ok(Status::CheckFailed);
        }
        writeln!(out, "check=pass")?;
    }
    Ok(Status::Ok)
}

fn write_one<'a>(
    dataset: &Dataset,
    paths: &'a Artifacts,
    format: Format,
    header: bool,
) -> anyhow::Result<&'a Path> {
    let target = match format {
        Format::Ecgb => {
            fs::write(&paths.ecgb, export_binary(dataset)?)?;
            &paths.ecgb
        }
        Format::Csv => {
            write_csv(
                dataset,
                BufWriter::new(fs::File::create(&paths.csv)?),
                header,
            )?;
            &paths.csv
        }
    };
    fs::write(&paths.manifest, manifest_to_text(&dataset.manifest, None))?;
    Ok(target.as_path())
}

pub fn export(
    mut cfg: PipelineConfig,
    a: &ExportArgs,
    out: &mut impl Write,
) -> anyhow::Result<Status> {
    apply(&mut cfg, &a.pipeline);
    if let Some(f) = a.split {
        cfg.split.train_fraction = f;
    }
    if let Some(s) = a.seed {
        cfg.split.seed = s;
    }
    cfg.split.stratified &= !a.no_stratify;
    let (dataset, healthy) = built(&cfg, out)?;

    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem = &cfg.output.stem;
    let header = cfg.output.csv_header;
    if a.no_split {
        let paths = Artifacts::new(dir, stem);
        let p = write_one(&dataset, &paths, a.format, header)?;
        writeln!(out, "wrote={}", p.display())?;
    } else {
        let (train, test) = split(&dataset, &cfg.split)?;
        for (part, name) in [(&train, "train"), (&test, "test")] {
            let paths = Artifacts::new(dir, &format!("{stem}_{name}"));
            let p = write_one(part, &paths, a.format, header)?;
            writeln!(out, "{name}.beats={}", part.len())?;
            writeln!(out, "wrote={}", p.display())?;
        }
    }
    Ok(if healthy {
        Status::Ok
    } else {
        Status::DataProblem
    })
}
