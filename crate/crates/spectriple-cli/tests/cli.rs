use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectriple")).args(args).env_remove("SPECTRIPLE_SEED").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn gamma_reports_the_lorentzian_k() {
    let v = json(&["gamma", "--m", "2", "--n", "1"]);
    assert_eq!(v["command"], "gamma");
    assert_eq!(v["data"]["structure"]["k"], "gamma^(0)");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let v = json(&["gamma", "--m", "1", "--n", "2"]);
    assert_eq!(v["data"]["structure"]["k"], "I");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["gamma", "--m", "5", "--n", "1"][..],
        &["gamma", "--m", "2", "--n", "5"],
        &["christoffel", "--family", "spherical"],
        &["product", "--lattice", "7"],
        &["product", "--mass", "0"],
        &["sigsolve", "--eps", "2"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_seed_variable_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_spectriple")).args(["ko-table"]).env("SPECTRIPLE_SEED", "abc").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_precedence() {
    let from_env = Command::new(env!("CARGO_BIN_EXE_spectriple"))
        .args(["--json", "spin", "--samples", "20"])
        .env("SPECTRIPLE_SEED", "99")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(v["parameters"]["seed"], 99);
    let from_flag = Command::new(env!("CARGO_BIN_EXE_spectriple"))
        .args(["--json", "--seed", "5", "spin", "--samples", "20"])
        .env("SPECTRIPLE_SEED", "99")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&from_flag.stdout).unwrap();
    assert_eq!(v["parameters"]["seed"], 5);
}

#[test]
fn sigsolve_finds_eight_time_like_twists() {
    let v = json(&["sigsolve", "--eps", "-1"]);
    let sols = v["data"]["eps=-1"]["report"]["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 8);
    assert!(sols.iter().all(|s| s["time_directions"] == 1));
}

#[test]
fn ko_table_contains_dimension_six() {
    let v = json(&["ko-table"]);
    let text = v["data"].to_string();
    assert!(text.contains("\"ko\":6"));
}

#[test]
fn christoffel_accepts_negative_parameters() {
    let v = json(&["christoffel", "--params", "-0.1,0.05", "--point", "0.1,-0.2,0,0.3"]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn table_output_and_timing() {
    let out = run(&["--timing", "ko-table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failed"));
    assert!(text.trim_end().ends_with("ms"));
    let v = json(&["ko-table"]);
    assert!(v["wall_time_ms"].is_null());
}

#[test]
fn out_writes_the_json_report() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("ko.json");
    let out = run(&["--out", path.to_str().unwrap(), "ko-table"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "ko-table");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = run(&["--json", "--seed", "17", "morphism", "--samples", "30"]);
    let b = run(&["--json", "--seed", "17", "morphism", "--samples", "30", "--sequential"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
