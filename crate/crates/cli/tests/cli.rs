use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thickmesh(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thickmesh")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn pipeline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = thickmesh(d, &["sample", "--mu", "0.1", "--domain-radius", "0.004", "--seed", "2", "--out", "pts.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_json(&out)["points"].as_u64().unwrap() > 50);

    let out = thickmesh(d, &["mesh", "--in", "pts.json", "--out", "mesh.json"]);
    assert_eq!(out.status.code(), Some(0));

    let args = ["desliver", "--in", "mesh.json", "--mu", "0.1", "--seed", "4", "--out", "a.json", "--log", "a.jsonl"];
    let out = thickmesh(d, &args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    assert!(summary["max_candidates"].as_u64().unwrap() <= 748_660);
    let args = ["desliver", "--in", "mesh.json", "--mu", "0.1", "--seed", "4", "--out", "b.json", "--log", "b.jsonl"];
    assert_eq!(thickmesh(d, &args).status.code(), Some(0));
    assert_eq!(std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());
    assert_eq!(std::fs::read(d.join("a.jsonl")).unwrap(), std::fs::read(d.join("b.jsonl")).unwrap());

    let out = thickmesh(d, &["audit", "--mesh", "a.json", "--mu", "0.1", "--report", "rep.json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&std::fs::read(d.join("rep.json")).unwrap()).unwrap();
    assert_eq!(report["slivers"], 0);
    assert_eq!(report["theta_floor"], true);
    let csv = std::fs::read_to_string(d.join("rep.csv")).unwrap();
    assert!(csv.starts_with("bin_lo,bin_hi,count\n"));
    assert_eq!(csv.lines().count(), 33);
}

#[test]
fn audit_flags_slivers_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = thickmesh(d, &["sample", "--eps", "0.2", "--domain-radius", "1.2", "--seed", "1", "--out", "p.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(thickmesh(d, &["mesh", "--in", "p.json", "--out", "m.json"]).status.code(), Some(0));
    // A generous threshold calls some interior tets slivers.
    let out = thickmesh(d, &["audit", "--mesh", "m.json", "--eps", "0.2", "--sigma", "0.3", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["slivers"].as_u64().unwrap() > 0);
}

#[test]
fn mismatched_scale_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    thickmesh(d, &["sample", "--mu", "0.1", "--domain-radius", "0.003", "--out", "p.json"]);
    thickmesh(d, &["mesh", "--in", "p.json", "--out", "m.json"]);
    let out = thickmesh(d, &["audit", "--mesh", "m.json", "--mu", "0.2", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constants_keys() {
    let dir = tempfile::tempdir().unwrap();
    let out = thickmesh(dir.path(), &["constants", "--mu", "0.1", "--sigma", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for key in ["eps", "delta", "a", "b", "R", "rho", "theta", "h0", "n", "J", "K", "V", "m", "N", "sigma_star"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["m"], 166);
    assert_eq!(v["N"], 748_660);
    assert_eq!(v["sigma_star"].as_f64().unwrap(), 2f64.powi(-31));
}

#[test]
fn lemma_command_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = thickmesh(d, &["lemma", "--id", "L4", "--mu", "0.1", "--sigma", "0.01", "--trials", "200", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["lemma"], "L4");
    assert_eq!(v["failures"], 0);
    assert_eq!(thickmesh(d, &["lemma", "--id", "L7", "--mu", "0.1", "--trials", "5"]).status.code(), Some(2));
    assert_eq!(thickmesh(d, &["lemma", "--id", "L1", "--mu", "0.1", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(thickmesh(d, &["constants", "--mu", "0.1", "--eps", "0.2"]).status.code(), Some(2));
    assert_eq!(thickmesh(d, &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn delaunay_oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = thickmesh(dir.path(), &["oracle", "delaunay", "--n", "10", "--seeds", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["mismatches"].as_array().unwrap().len(), 0);
}
