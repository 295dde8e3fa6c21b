use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn shiish(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiish"))
        .args(args)
        .env_remove("SHIISH_MAX_N")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn regions_csv_for_ish3() {
    let out = shiish(&["regions", "--n", "3", "--k", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.contains(&"133") && rows.contains(&"321"));
}

#[test]
fn regions_json_records() {
    let v = stdout_json(&shiish(&["regions", "--n", "4", "--k", "3"]));
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 125);
    for key in ["signs", "w", "H", "I", "label", "diagram"] {
        assert!(records[0].get(key).is_some(), "{key}");
    }
    let labels: Vec<String> = records
        .iter()
        .map(|r| r["label"].as_array().unwrap().iter().map(|x| x.to_string()).collect())
        .collect();
    assert!(labels.contains(&"2313".to_string()));
}

#[test]
fn regions_budget_and_usage() {
    let out = shiish(&["regions", "--n", "9", "--k", "2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));

    let out = Command::new(env!("CARGO_BIN_EXE_shiish"))
        .args(["regions", "--n", "3", "--k", "2"])
        .env("SHIISH_MAX_N", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);

    assert_eq!(code(&shiish(&["regions", "--n", "3", "--k", "5"])), 1);
    assert_eq!(code(&shiish(&["regions", "--n", "3"])), 1);
    assert_eq!(code(&shiish(&["regions", "--n", "3", "--k", "3", "--format", "dot"])), 1);
    assert_eq!(code(&shiish(&["frobnicate"])), 1);
    assert_eq!(code(&shiish(&["--help"])), 0);
}

#[test]
fn check_worked_example() {
    let v = stdout_json(&shiish(&["check", "4213", "--k", "all"]));
    assert_eq!(v["partial"], serde_json::json!({"2": true, "3": false, "4": false}));
    assert_eq!(v["parking"], true);
    assert_eq!(v["ish"], false);
    assert_eq!(v["centre"], serde_json::json!([3, 2]));

    let v = stdout_json(&shiish(&["check", "1111", "--k", "all"]));
    assert_eq!(v["parking"], true);
    assert_eq!(v["ish"], true);
    assert!(v["partial"].as_object().unwrap().values().all(|b| b == true));

    let v = stdout_json(&shiish(&["check", "4213", "--k", "2", "--trace"]));
    assert_eq!(v["burn"]["2"]["burnt"], serde_json::json!([0, 3, 2, 4, 1]));
    assert_eq!(v["burn"]["2"]["tree"], serde_json::json!([[0, 3], [0, 2], [2, 4], [0, 1]]));
}

#[test]
fn check_rejects_bad_words() {
    assert_eq!(code(&shiish(&["check", "4219"])), 1);
    assert_eq!(code(&shiish(&["check", "x"])), 1);
    let v = stdout_json(&shiish(&["check", "1,1,1,1,1,1,1,1,1,10", "--k", "10"]));
    assert_eq!(v["partial"]["10"], true);
}

#[test]
fn burn_reports() {
    let v = stdout_json(&shiish(&["burn", "4213", "--k", "3"]));
    assert_eq!(v["success"], false);
    assert_eq!(v["burnt"], serde_json::json!([0, 3, 2]));
    let v = stdout_json(&shiish(&["burn", "[4,2,1,3]", "--k", "2"]));
    assert_eq!(v["success"], true);
}

#[test]
fn graph_dot_and_json() {
    let out = shiish(&["graph", "--n", "4", "--k", "3"]);
    assert_eq!(code(&out), 0);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("3 -> 4"));

    let out = shiish(&["graph", "--n", "4", "--k", "3", "--rooted"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("0 -> 4"));

    let v = stdout_json(&shiish(&["graph", "--n", "4", "--k", "3", "--rooted", "--format", "json"]));
    assert_eq!(v["neighbors"][1], serde_json::json!([8, 4, 7, 3, 2]));
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = shiish(&["verify", "--n-max", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let cells: Vec<(u64, u64)> = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["n"].as_u64().unwrap(), c["k"].as_u64().unwrap()))
        .collect();
    assert_eq!(cells, vec![(3, 2), (3, 3)]);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_failure_exit_code() {
    // The literal permutation conditions admit 1144 for n = 4, k = 3.
    let out = shiish(&["verify", "--n-max", "4"]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(code(&shiish(&["verify", "--n-max", "9"])), 2);
    assert_eq!(code(&shiish(&["verify", "--n-max", "2"])), 1);
}

#[test]
fn count_table() {
    let v = stdout_json(&shiish(&["count", "--n", "4"]));
    let tails: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["tail_formula"].as_str().unwrap()).collect();
    assert_eq!(tails, vec!["200", "240", "256"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["tail_bruteforce"] == r["tail_formula"]));

    let v = stdout_json(&shiish(&["count", "--n", "12", "--k", "5"]));
    assert_eq!(v[0]["regions"], Value::Null);
    assert_eq!(v[0]["regions_formula"], "1792160394037");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, workers) in [(&a, "1"), (&b, "4")] {
        let out = shiish(&["--workers", workers, "regions", "--n", "4", "--k", "all", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let first = shiish(&["verify", "--n-max", "3", "--workers", "1"]).stdout;
    let second = shiish(&["verify", "--n-max", "3", "--workers", "3"]).stdout;
    assert_eq!(first, second);
}
