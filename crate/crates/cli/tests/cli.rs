use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use privinfo::belief::{AtomicDist, RationalDist};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_privinfo"))
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, v.to_string()).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_out(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn quarters() -> Value {
    json!({"atoms": [{"x": 0.25, "w": 0.5}, {"x": 0.75, "w": 0.5}]})
}

fn quarter_pair_structure() -> Value {
    let mut pmf = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            let q = (a + b) as f64 / 2.0;
            for (state, p) in [(0, 1.0 - q), (1, q)] {
                if p > 0.0 {
                    pmf.push(json!({"state": state, "signals": [a, b], "p": 0.25 * p}));
                }
            }
        }
    }
    json!({"m": 2, "n": 2, "alphabets": [2, 2], "pmf": pmf})
}

fn three_quarter_signal() -> Value {
    json!({"m": 2, "n": 1, "alphabets": [2], "pmf": [
        {"state": 0, "signals": [0], "p": 0.375},
        {"state": 0, "signals": [1], "p": 0.125},
        {"state": 1, "signals": [0], "p": 0.125},
        {"state": 1, "signals": [1], "p": 0.375},
    ]})
}

#[test]
fn conjugate_exact_and_csv() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "mu.json", &json!({"atoms": [{"x": 0.1, "w": 0.2}, {"x": 0.4, "w": 0.3}, {"x": 0.6, "w": 0.5}]}));
    let v = json_out(&run(&["conjugate", "--in", s(&f), "--exact"]));
    let expected = json!({"atoms": [
        {"x": "0", "w": "2/5"}, {"x": "1/2", "w": "1/5"}, {"x": "4/5", "w": "3/10"}, {"x": "1", "w": "1/10"}
    ]});
    assert_eq!(v, expected);
    assert!(RationalDist::from_json(&v).is_ok());

    let out = run(&["conjugate", "--in", s(&f), "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,F"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn conjugate_reads_stdin_and_round_trips() {
    use std::io::Write;
    let mut child = bin()
        .args(["conjugate"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(quarters().to_string().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let v = json_out(&out);
    let parsed = AtomicDist::<f64>::from_json(&v).unwrap();
    assert_eq!(parsed.to_json(), v);
    assert_eq!(parsed, AtomicDist::<f64>::from_json(&quarters()).unwrap().conjugate());
}

#[test]
fn pareto_check_verdicts() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", &quarters());
    let v = json_out(&run(&["pareto-check", "--mu1", s(&q), "--mu2", s(&q)]));
    assert_eq!(v, json!({"pareto_optimal": false}));

    let r = 256;
    let atoms: Vec<Value> = (0..r).map(|k| json!({"x": (k as f64 + 0.5) / r as f64, "w": 1.0 / r as f64})).collect();
    let u = write(&dir, "u.json", &json!({ "atoms": atoms }));
    let tol = format!("{}", 1.0 / (r * r) as f64);
    let v = json_out(&run(&["pareto-check", "--mu1", s(&u), "--mu2", s(&u), "--tol", &tol]));
    assert_eq!(v, json!({"pareto_optimal": true}));
}

#[test]
fn feasible_with_certificate() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", &quarters());
    let v = json_out(&run(&["feasible", "--mu1", s(&q), "--mu2", s(&q)]));
    assert_eq!(v["feasible"], true);
    assert_eq!(v["certificate"]["n"], 2);

    let strong = write(&dir, "s.json", &json!({"atoms": [{"x": 0.2, "w": 0.5}, {"x": 0.8, "w": 0.5}]}));
    let v = json_out(&run(&["feasible", "--mu1", s(&strong), "--mu2", s(&strong)]));
    assert_eq!(v, json!({"feasible": false, "certificate": null}));
}

#[test]
fn bounds_binary_slack() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "st.json", &quarter_pair_structure());
    let v = json_out(&run(&["bounds", "--ineq", "binary", "--in", s(&f)]));
    assert_eq!(v["inequality"], "binary");
    assert!((v["slack"].as_f64().unwrap() - 0.6194703623).abs() < 1e-6);
    let v = json_out(&run(&["bounds", "--ineq", "superadditivity", "--in", s(&f)]));
    assert_eq!(v["holds"], true);
}

#[test]
fn bounds_rejects_correlated_signals() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "st.json", &json!({"m": 2, "n": 2, "alphabets": [2, 2], "pmf": [
        {"state": 0, "signals": [0, 0], "p": 0.5},
        {"state": 1, "signals": [1, 1], "p": 0.5},
    ]}));
    let out = run(&["bounds", "--ineq", "quadratic", "--in", s(&f)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn welfare_matching_game() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "w.json", &json!({"u1": [[1, -1], [-1, 1]], "u2": [[1, -1], [-1, 1]], "prior": 0.5}));
    let v = json_out(&run(&["welfare", "--in", s(&f)]));
    assert!((v["welfare"].as_f64().unwrap() - (4.0 - 2.0 * 2f64.sqrt())).abs() < 1e-6);
    assert!((v["alpha"].as_f64().unwrap() - (0.5f64.sqrt() - 0.5)).abs() < 1e-4);
    assert!((v["beta"].as_f64().unwrap() - 0.5).abs() < 1e-4);
    assert_eq!(v["baseline"], 1.0);
}

#[test]
fn designer_reports_rationals_and_warns() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d.json", &json!({
        "u": [[0, -1, 1], [1, 0, -1], [-1, 1, 0]],
        "u_d": {"0": [[2, 1, 1], [1, 0, 0], [1, 0, 0]], "1": [[0, 0, 1], [0, 0, 1], [1, 1, 2]]},
        "prior": [0.5, 0.5]
    }));
    let out = run(&["designer", "--in", s(&f)]);
    let v = json_out(&out);
    assert_eq!(v["payoff"], "10/9");
    assert_eq!(v["baseline"], "2/3");
    assert_eq!(v["relaxed_bound"], "2");
    assert!(String::from_utf8_lossy(&out.stderr).contains("correlated equilibrium"));
}

#[test]
fn disclose_structure_and_samples() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "s.json", &three_quarter_signal());
    let csv_path = dir.path().join("samples.csv");
    let args = ["disclose", "--in", s(&f), "--samples", "20000", "--seed", "11", "--samples-out", s(&csv_path)];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json_out(&a);
    assert_eq!(v["beliefs"], json!({"atoms": [{"x": 0.0, "w": 0.25}, {"x": 0.5, "w": 0.5}, {"x": 1.0, "w": 0.25}]}));
    assert_eq!(v["samples"], 20000);
    let text = fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.lines().next(), Some("s1,s2star"));
    assert_eq!(text.lines().count(), 20001);

    let out = run(&["disclose", "--in", s(&f), "--samples", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn uniqueness_reports() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", &json!([[1, 0], [0, 1]]));
    let v = json_out(&run(&["uniqueness", "--in", s(&m)]));
    assert_eq!(v, json!({"unique": false, "witness": {"mate": [[0, 1], [1, 0]]}}));

    let g = write(&dir, "g.json", &json!({"n": 2, "R": 4, "cells": [[0, 0, 0, 1], [0, 0, 1, 1], [0, 1, 1, 1], [1, 1, 1, 1]]}));
    let v = json_out(&run(&["uniqueness", "--in", s(&g)]));
    assert_eq!(v["unique"], true);
    assert!(v["witness"]["additive"].is_array());

    let p = write(&dir, "p.json", &json!({"n": 2, "R": 4, "cells": [[0, 0, 1, 1], [0, 0, 1, 1], [2, 2, 1, 1], [2, 2, 1, 1]]}));
    let v = json_out(&run(&["uniqueness", "--partition", "--in", s(&p)]));
    assert_eq!(v["unique"], true);
}

#[test]
fn budget_exceeded_exits_three() {
    let dir = TempDir::new().unwrap();
    let r = 40;
    let cells: Vec<Vec<usize>> = (0..r).map(|i| (0..r).map(|j| (i + j >= r) as usize).collect()).collect();
    let p = write(&dir, "p.json", &json!({"n": 2, "R": r, "cells": cells}));
    let out = run(&["uniqueness", "--partition", "--in", s(&p)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn rasterize_region_and_structure() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "st.json", &quarter_pair_structure());
    let v = json_out(&run(&["rasterize", "--in", s(&f), "--resolution", "2"]));
    assert_eq!(v["R"], 2);
    assert_eq!(v["cells"][1][1], json!([0.0, 1.0]));

    let region = json!({"bands": [{"rect": [["0", "1"], ["0", "1"]], "y": [["0", "1/2"]]}]});
    let g = write(&dir, "r.json", &region);
    let out = run(&["rasterize", "--in", s(&g), "--resolution", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("i,j,p"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", &json!({"atoms": [{"x": 0.5}]}));
    let out = run(&["conjugate", "--in", s(&f)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("atoms[0].w"), "{err}");

    let f = write(&dir, "bad2.json", &json!({"u1": [[1, 0], [0, 1]], "u2": [[0, 0], [0, "x"]], "prior": 0.5}));
    let out = run(&["welfare", "--in", s(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("u2[1][1]"));

    let g = dir.path().join("broken.json");
    fs::write(&g, "{not json").unwrap();
    let out = run(&["bounds", "--ineq", "binary", "--in", s(&g)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
