use std::process::{Command, Output};

use serde_json::Value;

fn qdissect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdissect")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = qdissect(&full);
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn coeff_prints_a_bare_line() {
    let out = qdissect(&["coeff", "--gf", "f1^-3*f3^-3", "--upto", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1 3 9 25 60 135 296 609 1215");

    let out = qdissect(&["coeff", "--gf", "f1^-3*f3^-3", "--upto", "8", "--mod", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1 0 0 1 0 0 2 0 0");
}

#[test]
fn exit_codes() {
    assert_eq!(qdissect(&["check", "--a", "5", "--b", "3", "--mod", "5"]).status.code(), Some(0));
    assert_eq!(qdissect(&["check", "--a", "5", "--b", "1", "--mod", "5"]).status.code(), Some(1));
    assert_eq!(qdissect(&["coeff", "--gf", "f1^^2", "--upto", "3"]).status.code(), Some(2));
    assert_eq!(qdissect(&["coeff", "--gf", "1/(f1+f2)", "--upto", "3"]).status.code(), Some(2));
    assert_eq!(qdissect(&["theorem2", "--p", "7"]).status.code(), Some(2));
    assert_eq!(qdissect(&["check", "--a", "5", "--b", "1", "--mod", "1"]).status.code(), Some(2));
    assert_eq!(qdissect(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn refutation_is_reported_with_its_argument() {
    let v = json(&["check", "--a", "5", "--b", "1", "--mod", "5", "--limit", "100"]);
    let item = &v["items"][0];
    assert_eq!(item["kind"], "claim");
    assert_eq!(item["status"]["state"], "refuted_at");
    assert_eq!(item["status"]["n"], 1);
}

#[test]
fn json_report_schema() {
    let v = json(&["theorem1", "--limit", "2000"]);
    for key in ["command", "version", "ring", "order", "items", "duration_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "theorem1");
    let items = v["items"].as_array().unwrap();
    assert_eq!(items.len(), 8);
    assert!(items.iter().all(|i| i["kind"] == "claim"));

    let v = json(&["pdissect", "--p", "5,7", "--order", "100"]);
    assert!(v["items"].as_array().unwrap().iter().all(|i| i["kind"] == "p_dissection"));
    let v = json(&["verify-identities", "--order", "60", "--only", "euler-theta"]);
    assert_eq!(v["items"][0]["kind"], "identity");
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("duration_ms");
        v
    };
    let args = ["scan", "--gf", "f1^-3*f3^-3", "--amax", "6", "--moduli", "2,3", "--limit", "600", "--min-hits", "50"];
    assert_eq!(strip(json(&args)), strip(json(&args)));
}

#[test]
fn out_flag_writes_the_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = qdissect(&["--out", path.to_str().unwrap(), "quadratic-criterion", "--pmax", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "quadratic-criterion");
    assert!(v["items"].as_array().unwrap().iter().all(|i| i["kind"] == "quadratic"));
}
