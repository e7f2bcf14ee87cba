//! Value-level checks of the CLI subcommands against knowns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ncchern")
}

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env("NCCHERN_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn pair_corner_projection_with_ground_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let cocycle = tmp.path().join("phi.json");
    std::fs::write(&cocycle, r#"{"degree":0,"values":["1"]}"#).unwrap();
    let idem = tmp.path().join("e.json");
    std::fs::write(&idem, r#"{"amplify":2,"coords":["1","0","0","0"]}"#).unwrap();
    let out = run(
        tmp.path(),
        &[
            "pair", "--algebra", "mat(1)", "--cocycle", cocycle.to_str().unwrap(),
            "--idempotent", idem.to_str().unwrap(),
        ],
    );
    let v = stdout_json(&out);
    assert_eq!(v["value"], "1");
}

#[test]
fn lift_split_projection_order_one() {
    let tmp = tempfile::tempdir().unwrap();
    let idem = tmp.path().join("e.json");
    std::fs::write(&idem, r#"{"coords":["1","0"]}"#).unwrap();
    let out = run(
        tmp.path(),
        &[
            "lift", "--algebra", "prod(mat(1),mat(1))", "--idempotent",
            idem.to_str().unwrap(), "--order", "1",
        ],
    );
    let v = stdout_json(&out);
    assert_eq!(v["idempotent_mod_adic"], true);
    assert_eq!(v["order"], 1);
    // e + (2e - 1) de de on the split algebra
    let terms = v["lift"]["terms"].as_array().unwrap();
    let expect = serde_json::json!([
        {"head": 0, "d": [], "c": "1"},
        {"head": 0, "d": [0, 0], "c": "1"},
        {"head": 1, "d": [0, 0], "c": "-1"},
    ]);
    assert_eq!(serde_json::Value::Array(terms.clone()), expect);
}

#[test]
fn validate_trace_reports_all_axioms() {
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("tau.json");
    std::fs::write(&good, r#"{"coords":["1/2","0","0","1/2"]}"#).unwrap();
    let out = run(
        tmp.path(),
        &["validate-trace", "--algebra", "mat(2)", "--trace", good.to_str().unwrap()],
    );
    let v = stdout_json(&out);
    for key in ["normalized", "positive", "strictly_positive", "ad_invariant"] {
        assert_eq!(v[key], true, "{key}");
    }

    // the corner functional fails ad-invariance but still exits 0
    let corner = tmp.path().join("corner.json");
    std::fs::write(&corner, r#"{"coords":["1","0","0","0"]}"#).unwrap();
    let out = run(
        tmp.path(),
        &["validate-trace", "--algebra", "mat(2)", "--trace", corner.to_str().unwrap()],
    );
    let v = stdout_json(&out);
    assert_eq!(v["ad_invariant"], false);
    assert_eq!(v["normalized"], true);
}

#[test]
fn irreps_lists_su3_adjoint() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["irreps", "--group", "su3", "--count", "6"]);
    let v = stdout_json(&out);
    let reps = v["irreps"].as_array().unwrap();
    assert_eq!(reps.len(), 6);
    assert!(reps
        .iter()
        .any(|r| r["weight"] == serde_json::json!([1, 1]) && r["dim"] == "8"));
}

#[test]
fn hp_both_methods_agree_and_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "hp", "--algebra", "prod(mat(1),mat(1))", "--cap", "4", "--method", "both",
    ];
    let first = run(tmp.path(), &args);
    let v = stdout_json(&first);
    assert_eq!(v["agree"], true);
    assert_eq!(v["bicomplex"]["hp"]["even"], 2);
    assert_eq!(v["xcomplex"]["hp"]["even"], 2);
    let second = run(tmp.path(), &args);
    assert_eq!(first.stdout, second.stdout, "cache hit must be byte-identical");
}
