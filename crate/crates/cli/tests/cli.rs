use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ecgforge_core::synthetic::write_synthetic_corpus;

const NAMES: [&str; 3] = ["100", "101", "103"];

fn data_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic_corpus(dir.path(), &NAMES, 120.0).unwrap();
    dir
}

fn ecgforge(data: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecgforge"))
        .env_remove("ECGFORGE_DATA")
        .env("RUST_LOG", "off")
        .arg("--data-dir")
        .arg(data)
        .args(args)
        .output()
        .unwrap()
}

fn records() -> Vec<&'static str> {
    NAMES.iter().flat_map(|n| ["--record", n]).collect()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(ecgforge(tmp.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(ecgforge(tmp.path(), &["--version"]).status.code(), Some(0));
    assert_eq!(
        ecgforge(tmp.path(), &["build", "--bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(ecgforge(tmp.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        ecgforge(tmp.path(), &["build", "--downsample", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn stats_single_record_and_boxplot() {
    let data = data_dir();
    let svg = data.path().join("box.svg");
    let o = ecgforge(
        data.path(),
        &[
            "stats",
            "--record",
            "101",
            "--boxplot",
            svg.to_str().unwrap(),
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert_eq!(text.matches("# record ").count(), 1);
    assert!(text.contains("# record 101\n"));
    assert!(text.contains("outliers.upper_removed="));

    let svg = fs::read_to_string(svg).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let has = |class: &str| {
        doc.descendants()
            .any(|n| n.attribute("class") == Some(class))
    };
    assert!(has("box") && has("whisker") && has("outlier"));
}

#[test]
fn stats_check_fails_on_a_subset() {
    let data = data_dir();
    let mut args = vec!["stats", "--check"];
    args.extend(records());
    let o = ecgforge(data.path(), &args);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("class.N=fail"));
}

#[test]
fn build_is_deterministic() {
    let data = data_dir();
    let outs = [data.path().join("a"), data.path().join("b")];
    for out in &outs {
        let mut args = vec!["build", "--out-dir", out.to_str().unwrap()];
        args.extend(records());
        let o = ecgforge(data.path(), &args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).contains("accounting.balanced=true"));
    }
    for file in ["dataset.ecgb", "dataset.csv", "dataset.manifest"] {
        let a = fs::read(outs[0].join(file)).unwrap();
        let b = fs::read(outs[1].join(file)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{file} differs");
    }
    let manifest = fs::read_to_string(outs[0].join("dataset.manifest")).unwrap();
    assert!(manifest.contains("\nbeat_len=150\n"));
}

#[test]
fn downsample_one_keeps_450() {
    let data = data_dir();
    let out = data.path().join("full");
    let o = ecgforge(
        data.path(),
        &[
            "build",
            "--record",
            "100",
            "--downsample",
            "1",
            "--out-dir",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let manifest = fs::read_to_string(out.join("dataset.manifest")).unwrap();
    assert!(manifest.contains("\nbeat_len=450\n"));
}

#[test]
fn config_file_then_flags() {
    let data = data_dir();
    let cfg = data.path().join("ecgforge.toml");
    fs::write(
        &cfg,
        "records = [\"100\"]\n[transform]\ndownsample_factor = 1\n[output]\nstem = \"cfg\"\n",
    )
    .unwrap();
    let out = data.path().join("o");
    let base = [
        "--config",
        cfg.to_str().unwrap(),
        "build",
        "--out-dir",
        out.to_str().unwrap(),
    ];

    assert_eq!(ecgforge(data.path(), &base).status.code(), Some(0));
    let m = fs::read_to_string(out.join("cfg.manifest")).unwrap();
    assert!(m.contains("\nbeat_len=450\n"));

    let mut flagged = base.to_vec();
    flagged.extend(["--downsample", "3"]);
    assert_eq!(ecgforge(data.path(), &flagged).status.code(), Some(0));
    let m = fs::read_to_string(out.join("cfg.manifest")).unwrap();
    assert!(m.contains("\nbeat_len=150\n"));

    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    assert_eq!(ecgforge(data.path(), &base).status.code(), Some(1));
}

#[test]
fn missing_record_is_a_data_error() {
    let data = data_dir();
    let out = data.path().join("o");
    let o = ecgforge(
        data.path(),
        &[
            "build",
            "--record",
            "100",
            "--record",
            "999",
            "--out-dir",
            out.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("skipped.999="));
    let o = ecgforge(Path::new("/nonexistent/ecg"), &["stats", "--record", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_check_band() {
    let data = data_dir();
    let out = data.path().join("o");
    let mut args = vec!["build", "--check", "--out-dir", out.to_str().unwrap()];
    args.extend(records());
    let o = ecgforge(data.path(), &args);
    // Synthetic rhythms do not match the published class mix.
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("check.fail="));
}

#[test]
fn export_split_csv() {
    let data = data_dir();
    let out = data.path().join("x");
    let mut args = vec![
        "export",
        "--format",
        "csv",
        "--split",
        "0.8",
        "--seed",
        "42",
        "--header",
        "--out-dir",
        out.to_str().unwrap(),
    ];
    args.extend(records());
    let o = ecgforge(data.path(), &args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rows = |f: &str| fs::read_to_string(out.join(f)).unwrap().lines().count() - 1;
    let train = rows("dataset_train.csv");
    let test = rows("dataset_test.csv");
    let total: usize = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("beats="))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(train + test, total);
    assert_eq!(train, (total as f64 * 0.8 + 1e-9).floor() as usize);
    assert!(!out.join("dataset_train.ecgb").exists());

    let again = data.path().join("y");
    let mut args2 = vec!["export", "--no-split", "--out-dir", again.to_str().unwrap()];
    args2.extend(records());
    assert_eq!(ecgforge(data.path(), &args2).status.code(), Some(0));
    let bytes = fs::read(again.join("dataset.ecgb")).unwrap();
    assert_eq!(&bytes[..4], b"ECGB");
}

#[test]
fn fetch_verifies_local_files() {
    let data = data_dir();
    let mut args = vec!["fetch", "--base-url", "http://127.0.0.1:9"];
    args.extend(records());
    let o = ecgforge(data.path(), &args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("up to date"));

    let dat = data.path().join("101.dat");
    let mut bytes = fs::read(&dat).unwrap();
    bytes[1000] ^= 0x5a;
    fs::write(&dat, bytes).unwrap();
    let o = ecgforge(data.path(), &args);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("ChecksumMismatch") && err.contains("record 101"),
        "{err}"
    );
}

#[test]
fn fetch_without_network_explains() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ecgforge(
        tmp.path(),
        &[
            "fetch",
            "--record",
            "100",
            "--base-url",
            "http://127.0.0.1:9",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("by hand"));
}

#[test]
fn qrs_reports_each_record() {
    let data = data_dir();
    let mut args = vec!["qrs", "--check", "0.95"];
    args.extend(records());
    let o = ecgforge(data.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("check=pass").count(), 3);
}
