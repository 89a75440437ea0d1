//! End-to-end tests of the installed binary: exit codes, byte-identical
//! reports, CSV shape, and flag handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ars3d"))
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const COUNTEREXAMPLE: &str = r#"{
    "theta": {"family": "diagonal", "gamma": 0.0},
    "linear_field": {"xi": [0.0, 0.0], "A": [[0.0, 1.0], [0.0, 0.0]]},
    "distribution": {"basis": [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]},
    "candidate_map": {"kind": "linear", "a": -1.0, "P": [[1.0, 0.0], [0.0, 1.0]]}
}"#;

const ROTATION_DOC: &str = r#"{
    "theta": {"family": "rotation", "gamma": 0.7},
    "linear_field": {"xi": [0.8, 0.6], "A": [[0.4, -0.9], [0.9, 0.4]]},
    "distribution": {"basis": [[1.0, 0.0, 0.0], [0.5, 0.6, 0.8]]}
}"#;

#[test]
fn validate_exit_codes_follow_the_contract() {
    let doc = write_temp("ars3d_bin_validate.json", COUNTEREXAMPLE);
    let out = run(&["validate", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"rank_two\":false"));
    assert!(text.contains("\"admissible\":false"));

    let bad = write_temp("ars3d_bin_validate_bad.json", "definitely not json");
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));

    let nil = write_temp(
        "ars3d_bin_validate_nil.json",
        &COUNTEREXAMPLE.replace("[1.0, 0.0, 0.0]", "[0.0, 1.0, 0.0]"),
    );
    let out = run(&["validate", nil.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_is_deterministic_and_rank_gated() {
    let doc = write_temp("ars3d_bin_classify.json", ROTATION_DOC);
    let first = run(&["classify", doc.to_str().unwrap()]);
    let second = run(&["classify", doc.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.contains("\"class\":1"), "rotation classifies into class 1: {text}");

    let rank = write_temp("ars3d_bin_classify_rank.json", COUNTEREXAMPLE);
    let out = run(&["classify", rank.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_reports_and_exits_by_isometry() {
    let doc = write_temp("ars3d_bin_verify.json", COUNTEREXAMPLE);
    let out = run(&["verify", doc.to_str().unwrap(), "--samples", "300"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"automorphism\":false"));
    assert!(text.contains("\"passed\":true"));

    // perturb P off the isometry: time reversal with a shear no longer
    // transports the norm
    let skewed = COUNTEREXAMPLE.replace(
        "\"P\": [[1.0, 0.0], [0.0, 1.0]]",
        "\"P\": [[1.0, 0.001], [0.0, 1.0]]",
    );
    let doc = write_temp("ars3d_bin_verify_skew.json", &skewed);
    let out = run(&["verify", doc.to_str().unwrap(), "--samples", "300"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"witness\":{"), "failure must carry a witness: {text}");

    let missing = COUNTEREXAMPLE.replace("\"candidate_map\"", "\"unrelated\"");
    let doc = write_temp("ars3d_bin_verify_missing.json", &missing);
    let out = run(&["verify", doc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn demo_counterexample_prints_three_booleans() {
    let out = run(&["demo-counterexample", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{\"automorphism\":false,\"isometry\":true,\"rank_two\":false}\n"
    );

    let out = run(&["demo-counterexample", "--samples", "200", "--rank-two-field"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"isometry\":false"));
    assert!(text.contains("\"rank_two\":true"));
}

#[test]
fn locus_exports_csv_with_a_count() {
    let doc = write_temp("ars3d_bin_locus.json", COUNTEREXAMPLE);
    let csv_path = std::env::temp_dir().join("ars3d_bin_locus.csv");
    let out = run(&[
        "locus",
        doc.to_str().unwrap(),
        "--t",
        "0.5",
        "--window",
        "-1,1,-1,1",
        "--res",
        "41",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let count: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("count report is JSON");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,v1,v2"));
    let rows: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
    assert_eq!(rows.len() as u64, count["points"].as_u64().unwrap());
    assert!(!csv.contains('\r'), "line endings are LF only");

    let out = run(&[
        "locus",
        doc.to_str().unwrap(),
        "--window",
        "1,-1,-1,1",
    ]);
    assert_eq!(out.status.code(), Some(2), "reversed window is invalid");

    let out = run(&[
        "locus",
        doc.to_str().unwrap(),
        "--out",
        "/nonexistent-dir/slice.csv",
    ]);
    assert_eq!(out.status.code(), Some(74), "unwritable destination is an I/O error");
}

#[test]
fn usage_errors_exit_sixtyfour() {
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["locus", "/tmp/whatever.json", "--window", "a,b,c,d"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tolerance_env_is_honored() {
    let doc = write_temp("ars3d_bin_tol.json", COUNTEREXAMPLE);
    let out = bin()
        .args(["verify", doc.to_str().unwrap(), "--samples", "100"])
        .env("ARS3D_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));

    // an absurdly loose tolerance still verifies the true isometry
    let out = bin()
        .args(["verify", doc.to_str().unwrap(), "--samples", "100"])
        .env("ARS3D_TOL", "1e-2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
