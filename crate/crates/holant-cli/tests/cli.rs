use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn holant(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holant"))
        .args(args)
        .current_dir(dir)
        .env_remove("HOLANT_ARITY_CAP")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

const TRIANGLE: &str = r#"{"vertices": [{"sig": "eq2", "slots": 2}, {"sig": "eq2", "slots": 2}, {"sig": "eq2", "slots": 2}],
 "edges": [[{"v":0,"slot":1},{"v":1,"slot":0}], [{"v":1,"slot":1},{"v":2,"slot":0}], [{"v":2,"slot":1},{"v":0,"slot":0}]]}"#;

#[test]
fn builtin_then_strong_bell() {
    let dir = tempfile::tempdir().unwrap();
    let out = holant(&["builtin", "psi8", "--out", "psi8.json"], dir.path());
    assert!(out.status.success());
    let out = holant(&["--json", "bell", "--strong", "psi8.json"], dir.path());
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["payload"]["holds"], true);
    assert_eq!(doc["payload"]["cases"].as_array().unwrap().len(), 112);
}

#[test]
fn eval_triangle() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("grid.json"), TRIANGLE).unwrap();
    for mode in ["brute", "contract"] {
        let out = holant(&["--json", "eval", "grid.json", "--mode", mode], dir.path());
        assert_eq!(json_of(&out)["payload"]["value"], "2");
    }
    let out = holant(&["eval", "grid.json"], dir.path());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2");
}

#[test]
fn grid_references_signature_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("u.json"), r#"{"arity": 1, "values": [1, 1]}"#).unwrap();
    fs::write(
        dir.path().join("g.json"),
        r#"{"vertices": [{"sig": "u.json", "slots": 1}, {"sig": "u.json", "slots": 1}], "edges": [[{"v":0,"slot":0},{"v":1,"slot":0}]]}"#,
    )
    .unwrap();
    let out = holant(&["eval", "g.json", "--mode", "brute"], dir.path());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2");
}

#[test]
fn classify_cspk_reports_each_d() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("sigs.json"), r#"[{"arity": 2, "values": [1, 1, 1, "i"]}]"#).unwrap();
    let out = holant(&["--json", "classify", "--problem", "cspk", "--k", "3", "sigs.json"], dir.path());
    assert!(out.status.success());
    let doc = json_of(&out);
    let v = &doc["payload"];
    assert_eq!(v["outcome"], "hard");
    let failed = v["witness"]["failed"].as_array().unwrap();
    assert_eq!(failed.len(), 4);
    let out = holant(&["--json", "classify", "--problem", "csp", "sigs.json"], dir.path());
    assert_eq!(json_of(&out)["payload"]["outcome"], "hard");
}

#[test]
fn reduce_and_factor() {
    let dir = tempfile::tempdir().unwrap();
    let out = holant(&["--json", "reduce", "eq5"], dir.path());
    let doc = json_of(&out);
    assert_eq!(doc["payload"]["steps"][0]["op"], "self-loop");
    assert_eq!(doc["payload"]["terminal"]["name"], "ternary-non-t");
    let out = holant(&["--json", "factor", "psi6"], dir.path());
    assert_eq!(json_of(&out)["payload"]["factors"].as_array().unwrap().len(), 1);
    let out = holant(&["--json", "entangle", "psi6"], dir.path());
    assert_eq!(json_of(&out)["payload"]["report"]["genuinely_entangled"], true);
}

#[test]
fn transform_named_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = holant(&["transform", "eq2", "--named", "z-inv"], dir.path());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "[0, 1, 1, 0]");
    let out = holant(&["--backend", "float", "transform", "eq2", "--matrix", "1,0,0,-1"], dir.path());
    assert!(out.status.success());
}

#[test]
fn errors_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = holant(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = holant(&["--json", "factor", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["status"], "error");
    assert_eq!(doc["kind"], "parse");
    let out = holant(&["--json", "--backend", "float", "classify", "eq3"], dir.path());
    assert_eq!(json_of(&out)["kind"], "inexact-backend");
    let out = holant(&["--json", "--arity-cap", "4", "builtin", "psi6"], dir.path());
    assert_eq!(json_of(&out)["kind"], "arity-cap");
    let out = Command::new(env!("CARGO_BIN_EXE_holant"))
        .args(["--json", "builtin", "psi6"])
        .env("HOLANT_ARITY_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["kind"], "arity-cap");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = holant(&["--json", "--seed", "9", "bell", "psi6"], dir.path());
    let b = holant(&["--json", "--seed", "9", "bell", "psi6"], dir.path());
    assert_eq!(a.stdout, b.stdout);
}
