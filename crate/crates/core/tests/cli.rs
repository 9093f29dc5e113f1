use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcpforge"))
        .args(args)
        .env_remove("PCPFORGE_CAP_STATES")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_reduce_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let out = run(&["--seed", "3", "--out", path(&inst), "gen", "planted", "--u", "3", "--v", "3", "--k", "2", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(doc["m"], 3);
    assert!(doc["planted"].is_object());

    for variant in ["hypergraph", "e3sat", "4ss"] {
        let out = run(&["--in", path(&inst), "reduce", variant]);
        assert_eq!(out.status.code(), Some(0), "{variant}");
        assert!(!out.stdout.is_empty());
    }

    let out = run(&["--in", path(&inst), "eval", "--variant", "e3sat"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs[0]["lhs"], "1/1");
    assert_eq!(recs.last().unwrap()["check"], "summary");

    let out = run(&["--in", path(&inst), "eval", "--variant", "4ss", "--proofs", "ones"]);
    assert_eq!(records(&out)[0]["lhs"], "1/1");
}

#[test]
fn generation_is_reproducible() {
    let a = run(&["--seed", "11", "gen", "planted"]);
    let b = run(&["--seed", "11", "gen", "planted"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--seed", "12", "gen", "planted"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn check_with_few_trials_passes() {
    let out = run(&["--seed", "2", "check", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let recs = records(&out);
    let summary = recs.last().unwrap();
    assert_eq!(summary["check"], "summary");
    assert_eq!(summary["failed"], 0);
    assert!(recs[..recs.len() - 1].iter().all(|r| r["pass"] == true));
}

#[test]
fn params_reports_thresholds() {
    let out = run(&["--eps", "1/4", "params", "--variant", "e3sat"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = &records(&out)[0];
    assert_eq!(rec["detail"]["r"], (16.0 * 4f64.ln()).ceil() as u64);
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--eps", "2/1", "params", "--variant", "e3sat"]).status.code(), Some(2));
    assert_eq!(run(&["--in", "/nonexistent/inst.json", "eval"]).status.code(), Some(2));
    let out = run(&["reduce", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).lines().last().unwrap()).unwrap();
    assert!(err["error"].is_string());
}
