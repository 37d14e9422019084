use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn zfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zfock"))
        .args(args)
        .env_remove("ZFOCK_SEED")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--json", out.to_str().unwrap(), "--no-timing"]);
    let code = zfock(&full).status.code().unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    (code, serde_json::from_str(&text).unwrap())
}

fn path(name: &str) -> String {
    spec(name).to_string_lossy().into_owned()
}

#[test]
fn passing_check_exits_zero_with_schema_fields() {
    let (code, v) = report(&["check", &path("minus_flip_d2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["suite"], "check");
    assert_eq!(v["pass"], true);
    assert_eq!(v["spec_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["details"]["level_dims"], serde_json::json!([1, 2, 1, 0, 0]));
    for c in v["checks"].as_array().unwrap() {
        assert!(c["name"].is_string());
        assert_eq!(c["pass"], true, "{c}");
    }
}

#[test]
fn boltzmann_dims_double() {
    let (code, v) = report(&["check", &path("boltzmann_d2.json"), "--max-level", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["level_dims"], serde_json::json!([1, 2, 4, 8]));
}

#[test]
fn failing_axioms_exit_one() {
    let (code, v) = report(&["check", &path("failing/r4_sample.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(zfock(&["check"]).status.code(), Some(2));
    assert_eq!(zfock(&["check", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(zfock(&["check", &path("plus1.json"), "--internal-dim", "0"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(zfock(&["check", bad.to_str().unwrap()]).status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_zfock"))
        .args(["check", &path("plus1.json")])
        .env("ZFOCK_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_reproducible_without_timing() {
    let (_, a) = report(&["check", &path("r2_sample.json"), "--max-level", "3"]);
    let (_, b) = report(&["check", &path("r2_sample.json"), "--max-level", "3"]);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn equivalence_and_obstruction_modes() {
    let (code, v) = report(&[
        "iso",
        &path("minus_flip_d2.json"),
        &path("minus1_boxsum_minus1.json"),
        "--mode",
        "equivalence",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["equivalent"], true);

    let (code, v) = report(&[
        "iso",
        &path("minus_flip_d2.json"),
        &path("minus1_boxsum_minus1.json"),
        "--mode",
        "obstruction",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["left_pattern"], "car");
    assert_eq!(v["details"]["patterns_differ"], true);

    let (code, v) = report(&["iso", &path("flip_d2.json"), &path("boltzmann_d2.json"), "--mode", "equivalence"]);
    assert_eq!(code, 1);
    assert_eq!(v["details"]["equivalent"], false);
}

#[test]
fn factorize_reports_convolved_dims() {
    let (code, v) = report(&["iso", &path("minus_flip_d2.json"), &path("plus1.json"), "--mode", "factorize", "--max-level", "3"]);
    assert_eq!(code, 0);
    // (1,2,1,0) convolved with (1,1,1,1).
    assert_eq!(v["details"]["level_dims_box_sum"], serde_json::json!([1, 3, 4, 4]));
}

#[test]
fn smatrix_limits_and_warnings() {
    let (code, v) = report(&["smatrix", &path("smatrix/ising.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["suite"], "smatrix");

    let (code, v) = report(&["smatrix", &path("smatrix/weak_margin.json")]);
    assert_eq!(code, 0);
    assert!(!v["warnings"].as_array().unwrap().is_empty());

    assert_eq!(
        zfock(&["smatrix", &path("smatrix/ising.json"), "--theta-min", "1", "--theta-max", "0"]).status.code(),
        Some(2)
    );
}
