use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_serre-lab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("json output");
    assert_eq!(v["schema_version"], 1);
    v
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn wq_table_row() {
    let v = json(&["wq", "--n", "3", "--p", "5", "--tau", "2:8,1:0", "--route", "gl3"]);
    let weights = v["weights"].as_array().unwrap();
    assert!(weights.iter().any(|w| w["weight"] == serde_json::json!([6, 3, 0])));
    assert_eq!(v["count"], 9);
    let adps = json(&["wq", "--n", "3", "--p", "5", "--tau", "2:8,1:0", "--route", "adps"]);
    assert_eq!(adps["count"], 8);
}

#[test]
fn wq_accepts_non_canonical_exponents() {
    let a = json(&["wq", "--n", "3", "--p", "5", "--tau", "2:8,1:0"]);
    let b = json(&["wq", "--n", "3", "--p", "5", "--tau", "1:4, 2:40"]);
    assert_eq!(a["tau"], b["tau"]);
    assert_eq!(a["weights"], b["weights"]);
}

#[test]
fn wq_generic_route() {
    let v = json(&["wq", "--n", "2", "--p", "11", "--tau", "1:9,1:1", "--route", "generic", "--delta", "2"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn counts() {
    assert_eq!(json(&["counts", "--n", "4"])["count"], 88);
    assert_eq!(json(&["counts", "--n", "3", "--via", "enumeration"])["count"], 9);
}

#[test]
fn bdj_commands() {
    let v = json(&["bdj", "verify", "--p", "5", "--f", "2"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["counterexamples"].as_array().unwrap().len(), 0);
    let w = json(&["bdj", "weights", "--p", "5", "--f", "1", "--type", "niv1:2,0"]);
    let labels: Vec<_> = w["w_bdj"].as_array().unwrap().iter().map(|x| x["label"].clone()).collect();
    assert_eq!(labels, vec!["F(1, 0)", "F(3, 2)"]);
    let r = json(&["bdj", "rext", "--p", "5", "--f", "1", "--m", "2", "--b", "0"]);
    assert_eq!(r["r_p"]["label"], "F(3, 2)");
    let c = json(&["bdj", "weights", "--p", "3", "--f", "2", "--type", "niv2:1"]);
    assert_eq!(c["v_p_dimension"], 8);
}

#[test]
fn jantzen_reduce_mass() {
    let v = json(&["jantzen", "reduce", "--n", "3", "--p", "5", "--w", "(1 2 3)", "--lambda", "4,2,0"]);
    assert_eq!(v["dimension"], v["dl_dimension"]);
    assert!(!v["constituents"].as_array().unwrap().is_empty());
}

#[test]
fn compare_adps_tsv() {
    let out = run(&["compare-adps", "--p", "5", "--format", "tsv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("tau\tw_question\tadps"));
    assert!(text.lines().any(|l| l.starts_with("2:8,1:0\t9\t8\t[[6,3,0]]")));
}

#[test]
fn output_is_deterministic() {
    let args = ["wq", "--n", "3", "--p", "7", "--tau", "1:4,1:2,1:0"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["bdj", "verify", "--p", "3", "--f", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn domain_errors_name_the_flag() {
    let out = run(&["wq", "--n", "3", "--p", "9", "--tau", "1:0,1:0,1:0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--p"));
    let out = run(&["wq", "--n", "3", "--p", "5", "--tau", "oops"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--tau"));
    let out = run(&["wq", "--n", "3", "--p", "3", "--tau", "1:0,1:0,1:0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["bdj", "weights", "--p", "5", "--f", "1", "--type", "niv2:6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--type"));
    let out = run(&["jantzen", "reduce", "--n", "3", "--p", "5", "--w", "id", "--lambda", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--lambda"));
    let out = run(&["counts", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_quick() {
    let out = Command::new(env!("CARGO_BIN_EXE_serre-lab"))
        .args(["selftest", "--quick"])
        .env("SERRE_LAB_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 7);
}
