use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagmark"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn value<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["values"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["name"] == name)
        .unwrap_or_else(|| panic!("no value {name} in {v}"))
}

#[test]
fn pi_convergents() {
    let v = json(&["cf", "convergents", "--x", "pi:[3;7,15,1]", "--n", "3"]);
    let last = value(&v, "p_3/q_3");
    assert_eq!(last["value"], "355/113");
    assert_eq!(last["provenance"], "exact");
    let rows = v["table"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][1], "7");
    assert_eq!(rows[2][2], "333");
}

#[test]
fn freiman_sequence() {
    let v = json(&["spectrum", "m", "--seq", "(221221122)* 11 (221122122)*", "--tol", "1e-8"]);
    let m = value(&v, "m");
    assert_eq!(m["provenance"], "enclosure");
    assert!((m["approx"].as_f64().unwrap() - 3.118120178).abs() < 1e-7);
    assert!(m["width"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn surd_lagrange_value_is_exact() {
    let v = json(&["spectrum", "ell", "--alpha", "(1+sqrt(5))/2"]);
    let l = value(&v, "l");
    assert_eq!(l["provenance"], "exact");
    assert_eq!(l["value"], "sqrt(5)");
}

#[test]
fn verify_golden_passes() {
    let out = run(&["verify", "--suite", "golden", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("id,criterion,result,seconds,detail"));
    assert!(text.lines().nth(1).unwrap().contains(",pass,"));
}

#[test]
fn decimals_need_enclosure_flag() {
    let out = run(&["cantor", "stab", "--x", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&["cantor", "stab", "--x", "0.3", "--as-enclosure", "1e-12"]);
    assert_eq!(value(&v, "outcome")["value"], "not_found");
    assert!(v["inputs"]["x"].as_str().unwrap().contains('±'));
    let v = json(&["cantor", "stab", "--x", "1"]);
    assert_eq!(value(&v, "outcome")["value"], "found");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["cf", "convergents", "--x", "[3;7", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["boxdim", "count", "--t", "2", "--r", "3"]).status.code(), Some(3));
    let out = run(&["boxdim", "count", "--t", "7/2", "--r", "20", "--budget", "50"]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["budget_exhausted"], true);
}

#[test]
fn boxdim_csv_table() {
    let out = run(&["boxdim", "count", "--t", "sqrt(12)", "--r", "1", "--rmax", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,r,count_yes,count_maybe,pruned,dim_estimate");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("2*sqrt(3),1,"));
}

#[test]
fn markov_tree_and_points() {
    let v = json(&["markov", "tree", "--bound", "13"]);
    assert_eq!(value(&v, "triples")["value"], "4");
    let out = run(&["markov", "points", "--bound", "13", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n5,sqrt(221)/5,"));
}

#[test]
fn output_is_deterministic() {
    let args = ["cf", "levy", "--n", "200", "--samples", "10", "--seed", "9", "--format", "csv"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
}

#[test]
fn lattice_estimate_is_empirical() {
    let v = json(&["lattice", "ell", "--alpha", "1+sqrt(2)", "--qmax", "10000"]);
    let e = value(&v, "estimate");
    assert_eq!(e["provenance"], "empirical");
    assert!((e["approx"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-2);
}
