use ecgforge_core::beats::{build_dataset, build_from_dir, Normalization};
use ecgforge_core::pipeline::{run, write_artifacts, write_split};
use ecgforge_core::synthetic::{synthetic_corpus, write_synthetic_corpus};
use ecgforge_core::transform::{import_binary, manifest_from_text};
use ecgforge_core::wfdb::load_record;
use ecgforge_core::{BeatLabel, PeakSource, PipelineConfig};

const NAMES: [&str; 4] = ["900", "901", "902", "903"];

fn corpus() -> (tempfile::TempDir, PipelineConfig) {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic_corpus(dir.path(), &NAMES, 180.0).unwrap();
    let cfg = PipelineConfig {
        data_dir: dir.path().to_owned(),
        records: NAMES.iter().map(|s| s.to_string()).collect(),
        ..Default::default()
    };
    (dir, cfg)
}

#[test]
fn records_survive_the_disk() {
    let (dir, cfg) = corpus();
    let in_memory = synthetic_corpus(&NAMES, 180.0);
    for rec in &in_memory {
        assert_eq!(&load_record(dir.path(), rec.name()).unwrap(), rec);
    }
    assert_eq!(
        build_from_dir(dir.path(), &cfg.records, &cfg.build),
        build_dataset(&in_memory, &cfg.build)
    );
}

#[test]
fn delivered_beats() {
    let (_dir, cfg) = corpus();
    let d = run(&cfg).unwrap();
    assert!(d.manifest.skipped.is_empty());
    let m = &d.manifest;
    assert_eq!(
        (m.global_size, m.beat_len, m.downsample_factor),
        (450, 150, 3)
    );
    assert_eq!(m.sampling_rate(), 120.0);
    assert_eq!(m.normalization, Normalization::Zscore);
    assert_eq!(m.config_hash, cfg.hash());
    assert_eq!(m.class_counts, d.class_counts());
    for b in &d.beats {
        assert_eq!(b.samples.len(), 150);
        assert!(b.padding_is_zero());
        assert!(b.raw_length <= 450);
    }
    for l in [
        BeatLabel::N,
        BeatLabel::S,
        BeatLabel::V,
        BeatLabel::F,
        BeatLabel::Q,
    ] {
        assert!(m.class_counts.get(l) > 0, "no {l} beats");
    }
    let accounted: usize = m.accounting.values().map(|a| a.emitted).sum();
    assert_eq!(accounted, d.len());
}

#[test]
fn full_rate_keeps_global_size() {
    let (_dir, mut cfg) = corpus();
    cfg.transform.downsample_factor = 1;
    let d = run(&cfg).unwrap();
    assert_eq!(d.manifest.beat_len, 450);
    assert!(d.beats.iter().all(|b| b.samples.len() == 450));
}

#[test]
fn artifacts_round_trip() {
    let (_dir, cfg) = corpus();
    let d = run(&cfg).unwrap();
    let out = tempfile::tempdir().unwrap();
    let paths = write_artifacts(&d, out.path(), "set", true).unwrap();
    assert_eq!(
        import_binary(&std::fs::read(&paths.ecgb).unwrap()).unwrap(),
        d
    );

    let csv = std::fs::read_to_string(&paths.csv).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().ends_with("x149,label"));
    assert_eq!(lines.count(), d.len());

    let (manifest, provenance) =
        manifest_from_text(&std::fs::read_to_string(&paths.manifest).unwrap()).unwrap();
    assert!(provenance.is_empty());
    assert_eq!(manifest, d.manifest);
}

#[test]
fn split_files() {
    let (_dir, cfg) = corpus();
    let d = run(&cfg).unwrap();
    let out = tempfile::tempdir().unwrap();
    let (train, test) = write_split(&d, &cfg, out.path(), "set").unwrap();
    let train = import_binary(&std::fs::read(train.ecgb).unwrap()).unwrap();
    let test = import_binary(&std::fs::read(test.ecgb).unwrap()).unwrap();
    assert_eq!(train.len() + test.len(), d.len());
    assert_eq!(train.len(), (d.len() as f64 * 0.8 + 1e-9).floor() as usize);
    for l in BeatLabel::ALL {
        if d.class_counts().get(l) >= 2 {
            assert!(test.class_counts().get(l) >= 1, "{l} missing from test");
        }
    }
}

#[test]
fn detector_driven_build() {
    let (_dir, mut cfg) = corpus();
    cfg.build.peak_source = PeakSource::Slope;
    let d = run(&cfg).unwrap();
    assert!(d.manifest.skipped.is_empty(), "{:?}", d.manifest.skipped);
    for (name, a) in &d.manifest.accounting {
        assert!(a.balances(), "{name}: {a:?}");
    }
    // The detector finds nearly every annotated beat on clean synthetic data.
    let annotated = run(&PipelineConfig {
        build: Default::default(),
        ..cfg.clone()
    })
    .unwrap();
    let ratio = d.len() as f64 / annotated.len() as f64;
    assert!((0.9..1.1).contains(&ratio), "{ratio}");
}
