//! End-to-end checks of the binary: exit codes, formats, and the bundled
//! scenario files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

fn qconvex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qconvex"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn certify_torus_scenario_reports_boundary() {
    let out = qconvex(&[
        "certify",
        "--scenario",
        scenario("torus_boundary.json").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("beta_1"), "{text}");
    assert!(text.contains("bounded <= 4"), "{text}");
    assert!(text.contains("rigid-boundary"), "{text}");
}

#[test]
fn certify_structured_round_trips() {
    let out = qconvex(&[
        "certify",
        "--scenario",
        scenario("strict_vanishing.json").to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let report = qconvex::reports::Report::from_structured(&text).unwrap();
    for i in [2, 3, 4] {
        assert_eq!(
            report.certificate.degree(i).status,
            qconvex::betti_engine::DegreeStatus::Vanishes
        );
    }
}

#[test]
fn rational_sphere_scenario_vanishes_everywhere() {
    let out = qconvex(&[
        "certify",
        "--scenario",
        scenario("rational_sphere.json").to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert!(out.status.success());
    let report =
        qconvex::reports::Report::from_structured(&String::from_utf8(out.stdout).unwrap())
            .unwrap();
    for i in 1..=3 {
        assert_eq!(
            report.certificate.degree(i).status,
            qconvex::betti_engine::DegreeStatus::Vanishes
        );
    }
}

#[test]
fn missing_file_exits_3() {
    let out = qconvex(&["certify", "--scenario", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_scenario_exits_3() {
    let dir = std::env::temp_dir();
    let path = dir.join("qconvex_cli_test_malformed.json");
    std::fs::write(&path, r#"{"n": 4, "q": 2, "p": 1, "ambient": {"c": 1.0},
        "points": [{"curvatures": [1.0, 1.0, 1.0]}]}"#)
        .unwrap();
    let out = qconvex(&["certify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_file(&path).ok();
}

#[test]
fn convexity_violation_exits_2() {
    let dir = std::env::temp_dir();
    let path = dir.join("qconvex_cli_test_violated.json");
    std::fs::write(&path, r#"{"n": 4, "q": 2, "p": 1, "ambient": {"c": 1.0},
        "points": [{"curvatures": [-2.0, 1.0, 1.0, 1.0]}]}"#)
        .unwrap();
    let out = qconvex(&["certify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("point 0"), "{err}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn unknown_suite_exits_2() {
    let out = qconvex(&["sweep", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn torus_scan_anchor_row() {
    let out = qconvex(&[
        "torus-scan", "--n", "4", "--p", "1", "--q", "2",
        "--r", "0.7071067811865476",
        "--format", "structured",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    let row = &rows[0];
    assert!(row["margin"].as_f64().unwrap().abs() < 1e-12);
    assert!((row["h"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((row["lambda_min"].as_f64().unwrap() + 3.0).abs() < 1e-12);
    assert_eq!(row["rigid"], serde_json::Value::Bool(true));
}

#[test]
fn spectrum_subcommand_matches_closed_form() {
    let out = qconvex(&[
        "spectrum", "--n", "4", "--p", "1",
        "--k", "-1.0,1.0,1.0,1.0",
        "--format", "structured",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dense: Vec<f64> = v["dense"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((dense[0] + 3.0).abs() < 1e-10, "{dense:?}");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("qconvex_cli_test_out.json");
    let out = qconvex(&[
        "sweep", "--suite", "contraction_identity", "--samples", "5",
        "--format", "structured",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["failures"], serde_json::Value::from(0));
    std::fs::remove_file(&path).ok();
}
