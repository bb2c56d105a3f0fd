use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn genhilbert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genhilbert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares stdout with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) {
    let out = genhilbert(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let actual = stdout(&out);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("golden file {} missing", path.display()));
    assert_eq!(actual, expected, "output of {args:?} drifted from {name}");
}

#[test]
fn golden_classify_standard() {
    golden(
        "classify_standard.json",
        &["classify", "--family", "standard"],
    );
}

#[test]
fn golden_classify_weighted_csv() {
    golden(
        "classify_weighted.csv",
        &[
            "classify",
            "--family",
            "weighted-standard",
            "--format",
            "csv",
        ],
    );
}

#[test]
fn golden_spectrum_weighted() {
    golden(
        "spectrum_weighted_k3.json",
        &[
            "spectrum",
            "--family",
            "weighted-standard",
            "--k",
            "3",
            "--schedule",
            "4,8,16",
        ],
    );
}

#[test]
fn golden_bounds_odd_linear() {
    golden(
        "bounds_odd_linear.csv",
        &[
            "bounds",
            "--family",
            "odd-linear",
            "--k",
            "5",
            "--scan",
            "2000",
            "--format",
            "csv",
        ],
    );
}

#[test]
fn golden_presets() {
    golden("presets.json", &["presets"]);
}

#[test]
fn spectrum_ladder_increases() {
    let out = genhilbert(&[
        "spectrum",
        "--family",
        "weighted-standard",
        "--k",
        "3",
        "--schedule",
        "4,8,16",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ladder: Vec<f64> = v["ladder"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e[1].as_f64().unwrap())
        .collect();
    assert_eq!(ladder.len(), 3);
    assert!(ladder.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(v["config"]["schedule"], serde_json::json!([4, 8, 16]));
}

#[test]
fn trichotomy_through_the_binary() {
    let expect = [
        ("0.5", "No", "No"),
        ("1.0", "Yes", "No"),
        ("2.0", "Yes", "Yes"),
    ];
    for (alpha, bounded, compact) in expect {
        let out = genhilbert(&["classify", "--family", "power", "--alpha", alpha]);
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["report"]["bounded"], bounded, "alpha={alpha}");
        assert_eq!(v["report"]["compact"], compact, "alpha={alpha}");
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "spectrum",
        "--family",
        "standard",
        "--k",
        "2",
        "--schedule",
        "2,4,8,16,32,64",
    ];
    let first = genhilbert(&args);
    for _ in 0..3 {
        assert_eq!(genhilbert(&args).stdout, first.stdout);
    }
    let c = ["classify", "--family", "squared-odd", "--format", "csv"];
    assert_eq!(genhilbert(&c).stdout, genhilbert(&c).stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = genhilbert(&[
        "classify",
        "--family",
        "standard",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let direct = genhilbert(&["classify", "--family", "standard"]);
    assert_eq!(fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn sequence_files() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.txt");
    fs::write(&pairs, "# x d\n0.5 1\n1.5 1\n2.5 1\n").unwrap();
    let out = genhilbert(&[
        "classify",
        "--seq-file",
        pairs.to_str().unwrap(),
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["range_closed"], "Yes");
    assert_eq!(v["config"]["sequence"], "custom(n=3)");

    let selector = dir.path().join("family.json");
    fs::write(
        &selector,
        r#"{"family": "standard", "params": {"reciprocal": true}}"#,
    )
    .unwrap();
    let out = genhilbert(&["classify", "--seq-file", selector.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["compact"], "No");

    let zero = dir.path().join("zero.txt");
    fs::write(&zero, "1 1\n2 0\n").unwrap();
    let out = genhilbert(&["classify", "--seq-file", zero.to_str().unwrap(), "--strict"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn apply_reads_and_writes_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.csv");
    fs::write(&input, "# K=3 family=standard\n1\n0\n0\n").unwrap();
    let out = genhilbert(&[
        "apply",
        "--family",
        "standard",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "# K=3 family=standard\n1\n0.5\n0.3333333333333333\n"
    );
    let out = genhilbert(&[
        "apply",
        "--family",
        "standard",
        "--operator",
        "cesaro",
        "--input",
        input.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["values"][0], 2.0);
}

#[test]
fn invalid_configurations_exit_two() {
    for args in [
        vec!["classify"],
        vec!["classify", "--family", "standard", "--unknown-flag"],
        vec!["classify", "--family", "power", "--alpha", "0"],
        vec!["classify", "--seq-file", "/definitely/not/here"],
        vec![
            "spectrum",
            "--family",
            "standard",
            "--k",
            "4",
            "--schedule",
            "2",
        ],
        vec!["bounds", "--family", "standard", "--scan", "0"],
    ] {
        let out = genhilbert(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn strict_exit_code() {
    let out = genhilbert(&[
        "classify", "--family", "power", "--alpha", "0.5", "--strict",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = genhilbert(&["classify", "--family", "power", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
}
