use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use gpdef::deform::{SyzygyComparison, VersalReport};
use serde_json::Value;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn algebra(name: &str) -> String {
    fixtures().join(format!("{name}.json")).display().to_string()
}

fn module(name: &str) -> String {
    fixtures().join("modules").join(format!("{name}.json")).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpdef")).args(args).env_remove("TOOL_FIELD").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn text(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), contents).unwrap();
    f
}

#[test]
fn check_fixtures() {
    let r = json(&["check", &algebra("lambda0")]);
    assert_eq!(r["result"]["dim"], 8);
    assert_eq!(r["result"]["gentle"], true);
    assert_eq!(r["seed"], 0);
    let r = json(&["check", &algebra("lambda1")]);
    assert_eq!(r["result"]["dim"], 30);
    assert_eq!(r["result"]["special_biserial"], true);
    assert_eq!(r["result"]["gentle"], false);
    assert_eq!(r["result"]["gorenstein"]["left_injdim"], serde_json::json!({"kind": "finite", "value": 2}));
    assert_eq!(r["result"]["gorenstein"]["right_injdim"], serde_json::json!({"kind": "finite", "value": 2}));
    let t = text(&["check", &algebra("lambda1")]);
    assert!(t.contains("dim: 30") && t.contains("injdim: left 2, right 2"), "{t}");
}

#[test]
fn input_errors_exit_2() {
    let bad = write_temp("{ not json");
    assert_eq!(run(&["check", bad.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/algebra.json"]).status.code(), Some(2));
    let l0 = algebra("lambda0");
    let band = r#"{"kind":"band","word":["a"]}"#;
    assert_eq!(run(&["ext", &l0, band, band]).status.code(), Some(2));
    let bad_string = r#"{"kind":"string","word":["a","a"]}"#;
    assert_eq!(run(&["hom", &l0, bad_string, bad_string]).status.code(), Some(2));
}

#[test]
fn non_admissible_exits_3() {
    let loop_only = write_temp(
        r#"{"field":"Q","vertices":["0"],"arrows":[{"name":"x","from":"0","to":"0"}],"relations":[]}"#,
    );
    assert_eq!(run(&["check", loop_only.path().to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn classify_lambda0() {
    let r = json(&["classify", &algebra("lambda0")]);
    let mods = r["result"]["modules"].as_array().unwrap();
    let got: Vec<(String, Value)> =
        mods.iter().map(|m| (m["label"].as_str().unwrap().to_string(), m["iso"].clone())).collect();
    let want = vec![
        ("P0".to_string(), Value::Null),
        ("P1".to_string(), Value::Null),
        ("R(a)".to_string(), Value::from("M[b]")),
        ("R(b)".to_string(), Value::from("M[1_1]")),
        ("R(c)".to_string(), Value::from("M[ba]")),
    ];
    assert_eq!(got, want);
    assert!(mods.iter().all(|m| m["universal"] == true));
    assert_eq!(r["result"]["critical_cycles"], serde_json::json!([["a"], ["b", "c"]]));
}

#[test]
fn classify_rejects_non_gentle_and_handles_a2() {
    assert_eq!(run(&["classify", &algebra("lambda2")]).status.code(), Some(4));
    let a2 = write_temp(
        r#"{"field":"Q","vertices":["0","1"],"arrows":[{"name":"x","from":"0","to":"1"}],"relations":[]}"#,
    );
    let r = json(&["classify", a2.path().to_str().unwrap()]);
    let labels: Vec<&str> = r["result"]["modules"].as_array().unwrap().iter().map(|m| m["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["P0", "P1"]);
}

#[test]
fn hom_ext_syzygy() {
    let l0 = algebra("lambda0");
    assert_eq!(json(&["ext", &l0, &module("M_b"), &module("M_b"), "--degree", "1"])["result"]["dim"], 1);
    assert!(text(&["ext", &l0, &module("M_b"), &module("M_b")]).contains("= 1"));
    assert_eq!(json(&["hom", &l0, &module("P0"), &module("P0")])["result"]["dim"], 2);
    let with_basis = json(&["hom", &l0, &module("P0"), &module("P0"), "--basis"]);
    assert_eq!(with_basis["result"]["basis"].as_array().unwrap().len(), 2);
    let list = module("lambda1_V_list");
    let r = json(&["syzygy", &algebra("lambda1"), &module("V_0_0"), "--power", "1", "--identify", &list]);
    assert_eq!(r["result"]["identified"], "V_{2,4}");
    let r = json(&["syzygy", &algebra("lambda1"), &module("V_0_2"), "--identify", &list]);
    assert_eq!(r["result"]["identified"], "V_{0,2}");
}

#[test]
fn deform_reports() {
    let r = json(&["deform", &algebra("lambda0"), &module("M_b")]);
    let report: VersalReport = serde_json::from_value(r["result"].clone()).unwrap();
    assert_eq!(report.ring, gpdef::deform::Ring::Truncated { n: 2 });
    assert!(report.universal);
    // Round trip.
    assert_eq!(serde_json::to_value(&report).unwrap(), r["result"]);
    let t = text(&["deform", &algebra("lambda0"), &module("M_b")]);
    assert!(t.contains("ring: k[[t]]/(t^2)") && t.contains("N: 2"), "{t}");

    let r = json(&["deform", &algebra("lambda2"), &module("W0")]);
    let n = r["result"]["ring"]["N"].as_u64().expect("truncated ring");
    assert!(n >= 2);
    assert!(text(&["deform", &algebra("lambda2"), &module("W0")]).contains(&format!("N: {n}")));

    let r = json(&["deform", &algebra("lambda0"), &module("P0")]);
    assert_eq!(r["result"]["ring"]["type"], "k");
    assert_eq!(r["result"]["universal"], true);
    assert_eq!(r["result"]["justification"], "projective");
}

#[test]
fn deform_compare_syzygy() {
    let r = json(&["deform", &algebra("lambda0"), &module("S1"), "--compare-syzygy", "--seed", "4"]);
    let c: SyzygyComparison = serde_json::from_value(r["result"].clone()).unwrap();
    assert!(c.rings_match);
    assert_eq!(c.module.seed, 4);
    assert_eq!(r["seed"], 4);
}

#[test]
fn field_override_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_gpdef"))
        .args(["check", &algebra("lambda0"), "--json"])
        .env("TOOL_FIELD", "F7")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["field"], "F7");
    assert_eq!(r["result"]["dim"], 8);
    let bad = Command::new(env!("CARGO_BIN_EXE_gpdef"))
        .args(["check", &algebra("lambda0")])
        .env("TOOL_FIELD", "F8")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn golden_commands_finish_quickly() {
    let start = Instant::now();
    for a in ["lambda0", "lambda1", "lambda2"] {
        text(&["check", &algebra(a)]);
    }
    text(&["classify", &algebra("lambda0")]);
    for m in ["M_b", "M_ba", "S1", "P0"] {
        text(&["deform", &algebra("lambda0"), &module(m), "--compare-syzygy"]);
    }
    for i in 0..3 {
        for j in 0..5 {
            text(&["deform", &algebra("lambda1"), &module(&format!("V_{i}_{j}")), "--compare-syzygy"]);
        }
    }
    text(&["deform", &algebra("lambda2"), &module("W0"), "--compare-syzygy"]);
    assert!(start.elapsed() < Duration::from_secs(60));
}
