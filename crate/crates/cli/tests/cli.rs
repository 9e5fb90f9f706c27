use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cdel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdel")).args(args).env_remove("CDEL_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_p3_with_budget_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p3.txt", "0 1\n1 2\n");
    let out = cdel(&["solve", &f, "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "yes");
    assert_eq!(v["witness"].as_array().unwrap().len(), 1);
}

#[test]
fn solve_c5_with_budget_two_is_no() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c5.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n");
    for s in ["baseline2k", "bd2011", "new1404"] {
        let out = cdel(&["solve", &f, "--k", "2", "--strategy", s]);
        assert_eq!(out.status.code(), Some(1), "{s}");
        assert_eq!(json(&out)["status"], "no");
    }
    let v = json(&cdel(&["solve", &f]));
    assert_eq!(v["status"], "solved");
    assert_eq!(v["optimum"], 3);
}

#[test]
fn solve_output_is_deterministic_apart_from_timing() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    assert!(cdel(&["gen", "gnp", "--n", "12", "--p", "0.4", "--seed", "3", "-o", path(&g)]).status.success());
    let run = || {
        let mut v = json(&cdel(&["solve", path(&g), "--strategy", "bd2011"]));
        v["stats"]["elapsed_ms"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn parse_errors_name_the_line_and_exit_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.txt", "0 1\n1 x\n");
    let out = cdel(&["solve", &f, "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "error");
    assert!(v["error"].as_str().unwrap().contains("line 2"), "{v}");
}

#[test]
fn timeout_is_an_explicit_status() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c5.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n");
    let out = cdel(&["solve", &f, "--timeout", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "timeout");
    assert!(v["witness"].is_null() && v["optimum"].is_null());
}

#[test]
fn batch_results_keep_input_order() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n");
    let b = write(&dir, "b.txt", "0 1\n1 2\n0 2\n");
    let out = Command::new(env!("CARGO_BIN_EXE_cdel")).args(["solve", &a, &b]).env("CDEL_THREADS", "2").output().unwrap();
    assert!(out.status.success());
    let v = json(&out);
    let optima: Vec<i64> = v.as_array().unwrap().iter().map(|r| r["optimum"].as_i64().unwrap()).collect();
    assert_eq!(optima, vec![3, 0]);
}

#[test]
fn oracle_examples_and_size_cap() {
    let dir = TempDir::new().unwrap();
    for (text, opt) in [("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n", 0), ("0 1\n1 2\n2 3\n3 4\n4 0\n", 3), ("0 1\n1 2\n2 3\n", 1)] {
        let f = write(&dir, "g.txt", text);
        assert_eq!(json(&cdel(&["oracle", &f]))["optimum"], opt);
    }
    let big = dir.path().join("big.txt");
    assert!(cdel(&["gen", "path", "--n", "19", "-o", path(&big)]).status.success());
    let out = cdel(&["oracle", path(&big)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn planted_instances_respect_their_bound() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("planted.txt");
    assert!(cdel(&["gen", "planted", "--sizes", "5,5,5", "--q", "4", "--seed", "11", "-o", path(&g)]).status.success());
    let side: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("planted.txt.json")).unwrap()).unwrap();
    assert_eq!(side["q"], 4);
    let v = json(&cdel(&["solve", path(&g)]));
    assert!(v["optimum"].as_u64().unwrap() <= 4);
}

#[test]
fn generators_are_stable_under_a_seed() {
    let a = cdel(&["gen", "gnp", "--n", "9", "--p", "0.5", "--seed", "7"]);
    let b = cdel(&["gen", "gnp", "--n", "9", "--p", "0.5", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    assert_eq!(cdel(&["gen", "gnp", "--n", "9", "--p", "1.5"]).status.code(), Some(2));
}

#[test]
fn counterexample_has_eight_frontier_edges() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("ce.txt");
    assert!(cdel(&["gen", "paper-counterexample", "-o", path(&g)]).status.success());
    let text = std::fs::read_to_string(&g).unwrap();
    assert!(text.starts_with('#') && text.contains("c3"));
    let v = json(&cdel(&["analyze", "structure", path(&g), "--p3", "0,1,2"]));
    assert_eq!(v["context"]["frontiers"][0].as_array().unwrap().len(), 8);
}

#[test]
fn structure_of_an_isolated_p3_has_infinite_j() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p3.txt", "0 1\n1 2\n");
    let v = json(&cdel(&["analyze", "structure", &f]));
    assert_eq!(v["j"], "inf");
}

#[test]
fn branching_numbers_from_the_command_line() {
    let v = json(&cdel(&["bn", "2,2"]));
    assert!((v["branching_number"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-6);
    let v = json(&cdel(&["analyze", "bn", "--r", "5"]));
    assert_eq!(format!("{:.3}", v["branching_number"].as_f64().unwrap()), "1.406");
    assert_eq!(cdel(&["bn", "2,0"]).status.code(), Some(2));
}

#[test]
fn bound_table_passes_every_row() {
    let out = cdel(&["analyze", "paper-table"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert!(rows.len() >= 9);
    assert!(rows.iter().all(|r| r["pass"] == true), "{rows:?}");
    assert!(rows.iter().any(|r| r["quoted_bound"] == "< 1.404"));
}

#[test]
fn config_analysis_with_a_zero_cap_names_uncovered_strata() {
    let out = cdel(&["enum-configs", "--time-cap", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["coverage"]["complete"], false);
    assert!(!v["coverage"]["uncovered_strata"].as_array().unwrap().is_empty());
    assert!(v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn bench_reports_every_strategy() {
    let v = json(&cdel(&["bench", "--count", "10", "--seed", "2"]));
    let summary = v["summary"].as_array().unwrap();
    assert_eq!(summary.len(), 3);
    assert!(v["anomalies"].as_array().unwrap().is_empty());
}
