use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nzflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nzflow")).args(args).output().expect("binary runs")
}

fn arg(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

fn error_code(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("JSON on stderr");
    v["error"]["code"].as_str().expect("code").to_string()
}

#[test]
fn a4_has_no_flow() {
    let dir = tempfile::tempdir().unwrap();
    let out = nzflow(&["construct", "a4", "--out-dir", arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let graph = dir.path().join("graph.json");
    let out = nzflow(&["flow", "find", "--graph", arg(&graph), "--method", "oracle"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "NONE");
}

#[test]
fn gamma3_flow_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = nzflow(&["construct", "gamma3", "--p", "5", "--s", "1", "--out-dir", arg(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["certificate.json", "flow.json", "graph.dot", "graph.json", "group.json", "report.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let out = nzflow(&["flow", "verify", "--graph", arg(&dir.path().join("graph.json")), "--flow", arg(&dir.path().join("flow.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["nowhere_zero"], Value::Bool(true));
}

#[test]
fn broken_flow_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    nzflow(&["construct", "gamma1", "--p", "7", "--k", "1", "--r", "2", "--out-dir", arg(dir.path())]);
    let path = dir.path().join("flow.json");
    let mut flow: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let values = flow["values"].as_array_mut().expect("values array");
    let first = values[0]["value"].as_u64().unwrap();
    values[0]["value"] = Value::from((first % 2) + 1);
    fs::write(&path, flow.to_string()).unwrap();
    let out = nzflow(&["flow", "verify", "--graph", arg(&dir.path().join("graph.json")), "--flow", arg(&path)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn k6_certificate_search() {
    let dir = tempfile::tempdir().unwrap();
    let table: Vec<Vec<u32>> = (0..6).map(|i| (0..6).map(|j| (i + j) % 6).collect()).collect();
    let table_path = dir.path().join("z6.json");
    fs::write(&table_path, serde_json::to_string(&table).unwrap()).unwrap();
    let group_path = dir.path().join("group.json");
    let out = nzflow(&["group", "table", "--file", arg(&table_path), "--out", arg(&group_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // Cay(Z6, {1, 2, 3, 4, 5}) is K6.
    let graph_path = dir.path().join("k6.json");
    let dot_path = dir.path().join("k6.dot");
    let out = nzflow(&[
        "cayley", "--group", arg(&group_path), "--connection", "g1,g2,g3,g4,g5", "--out", arg(&graph_path), "--dot", arg(&dot_path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(&dot_path).unwrap().starts_with("graph G {"));
    let flow_path = dir.path().join("flow.json");
    let out = nzflow(&["flow", "find", "--graph", arg(&graph_path), "--method", "certificate", "--out", arg(&flow_path)]);
    assert_eq!(out.status.code(), Some(0));
    let out = nzflow(&["flow", "verify", "--graph", arg(&graph_path), "--flow", arg(&flow_path)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn group_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("g.json");
    let out = nzflow(&["group", "family-ii", "--p", "5", "--s", "2", "--out", arg(&first)]);
    assert_eq!(out.status.code(), Some(0));
    let out = nzflow(&["group", "table", "--file", arg(&first)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), fs::read_to_string(&first).unwrap());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], Value::from(60));
}

#[test]
fn parameter_errors_exit_2() {
    let out = nzflow(&["group", "family-i", "--p", "5", "--k", "1", "--r", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "parameter");

    let dir = tempfile::tempdir().unwrap();
    let out = nzflow(&["construct", "gamma3", "--p", "5", "--out-dir", arg(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "parameter");
}

#[test]
fn oracle_capacity_error_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    nzflow(&["construct", "gamma3", "--p", "5", "--s", "1", "--out-dir", arg(dir.path())]);
    let graph = dir.path().join("graph.json");
    let out = nzflow(&["flow", "find", "--graph", arg(&graph), "--method", "oracle"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "capacity");
    let out = nzflow(&["flow", "find", "--graph", arg(&graph), "--method", "certificate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "capacity");
}

#[test]
fn deterministic_campaign_is_reproducible() {
    let args = [
        "campaign", "--families", "gamma1,gamma2,gamma3,gamma4", "--p-max", "7", "--k-set", "1", "--oracle-spot-check", "4",
        "--deterministic",
    ];
    let one = nzflow(&[&args[..], &["--jobs", "1"]].concat());
    let two = nzflow(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, two.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    let total = v["total"].as_u64().unwrap();
    assert_eq!(v["passed"].as_u64().unwrap() + v["failed"].as_u64().unwrap(), total);
    assert_eq!(v["failed"], Value::from(0));
    assert_eq!(v["cases"].as_array().unwrap().len() as u64, total);
    assert_eq!(v["cases"].as_array().unwrap().iter().filter(|c| c["spot_check"] == Value::Bool(true)).count(), 4);
}

#[test]
fn unknown_family_is_a_parameter_error() {
    let out = nzflow(&["campaign", "--families", "gamma7"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_code(&out), "parameter");
}
