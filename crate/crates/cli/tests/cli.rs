use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn levi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levi")).args(args).output().expect("levi runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn input(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn validate_so3_passes() {
    let out = levi(&["validate", "--input", &input("so3_model.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["command"], "validate");
    assert_eq!(r["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn non_poisson_fails_with_witness() {
    let out = levi(&["validate", "--input", &input("so3_non_poisson.json")]);
    assert_eq!(out.status.code(), Some(1));
    let w = &report(&out)["validation"]["problem"]["witness"];
    assert_eq!(w["kind"], "jacobi");
    assert_eq!(w["exponents"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_rational_is_a_parse_error() {
    let out = levi(&["validate", "--input", &input("malformed_rational.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") && err.contains("1/0"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(levi(&["normalize"]).status.code(), Some(2));
    assert_eq!(levi(&["schedule", "--n", "3", "--t0", "1/0"]).status.code(), Some(2));
    assert_eq!(levi(&["frobnicate"]).status.code(), Some(2));
    let out = levi(&["algebroid", "--input", &input("so3_model.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = levi(&["schedule", "--n", "3", "--variant", "appendix"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn normalize_conn_fixture_relations_hold() {
    let out = levi(&["normalize", "--input", &input("conn_so3_d8.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let rel = &r["result"]["relations"];
    for key in ["xx", "xy", "pushforward_consistent"] {
        assert_eq!(rel[key], true, "{key}");
    }
    assert_eq!(r["result"]["status"], "converged");
    assert!(r["result"]["log"]["steps"].as_array().unwrap().len() <= 4);
}

#[test]
fn scheduled_normalize_carries_an_audit() {
    let out = levi(&[
        "normalize",
        "--input",
        &input("conn_so3_d8.json"),
        "--degree",
        "6",
        "--mode",
        "scheduled",
        "--t0",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["options"]["t0"], "16");
    assert!(!r["result"]["audit"]["steps"].as_array().unwrap().is_empty());
}

#[test]
fn schedule_n3_constants() {
    let out = levi(&["schedule", "--n", "3", "--variant", "main", "--t0", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["constants"]["s"], 2);
    assert_eq!(r["result"]["constants"]["A"], 21);
    assert_eq!(r["result"]["sequence"]["entries"][1]["t_exact"], "64");
}

#[test]
fn cohomology_so3_identity_holds() {
    let out = levi(&["cohomology", "--input", &input("so3_model.json"), "--kind", "functions"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let m = &r["result"]["modules"][0];
    assert_eq!(m["homotopy_identity_passed"], true);
    assert!(m["homotopy"]["entries"].as_array().unwrap().iter().all(|e| e["passed"] == true));
}

#[test]
fn algebroid_fixture_normalizes() {
    let out = levi(&["algebroid", "--input", &input("so3_action_algebroid_perturbed_d5.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["relations"]["fiberwise_linear"], true);
    assert_eq!(r["result"]["relations"]["theta_preserves_fibers"], true);
}

#[test]
fn axioms_small_sample() {
    let out = levi(&["axioms", "--n", "2", "--degree", "4", "--samples", "25", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["spectral"]["samples"], 25);
}

#[test]
fn output_file_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = levi(&[
            "normalize",
            "--input",
            &input("so3_action_algebroid_d5.json"),
            "--output",
            &p.display().to_string(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn echoed_input_reruns_to_the_same_report() {
    let first = levi(&["validate", "--input", &input("conn_so3_d8.json")]);
    let r = report(&first);
    let dir = tempfile::tempdir().unwrap();
    let echo = dir.path().join("echo.json");
    let mut text = serde_json::to_string_pretty(&r["input"]).unwrap();
    text.push('\n');
    std::fs::write(&echo, text).unwrap();
    let second = levi(&["validate", "--input", &echo.display().to_string()]);
    assert_eq!(first.stdout, second.stdout);
}
