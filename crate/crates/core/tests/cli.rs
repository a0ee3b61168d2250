use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hamdecomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamdecomp")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_decompose_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k5x2.txt");
    let dec = dir.path().join("dec.json");
    let report = dir.path().join("report.json");
    let stages = dir.path().join("stages");

    let o = hamdecomp(&["gen", "--family", "directed-complete", "--n", "5", "--lambda", "2", "-o", p(&graph)]);
    assert_eq!(code(&o), 0);

    let o = hamdecomp(&[
        "decompose",
        p(&graph),
        "--r",
        "2",
        "--seed",
        "3",
        "--json",
        "-o",
        p(&dec),
        "--report",
        p(&report),
        "--dump-stages",
        p(&stages),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = json(&o);
    assert_eq!(summary["cycles"].as_array().unwrap().len(), 8);
    assert!(summary["verified"].as_bool().unwrap());

    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["config"]["r"], 2);
    assert_eq!(rep["config"]["seed"], 3);
    assert!(!rep["attempts"].as_array().unwrap().is_empty());
    assert!(std::fs::read_dir(&stages).unwrap().count() > 0);

    let o = hamdecomp(&["verify", p(&graph), p(&dec), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["accepted"], true);

    // the summary printed by --json is itself a valid decomposition file
    let printed = dir.path().join("printed.json");
    std::fs::write(&printed, &o.stdout).unwrap();
    let summary_file = dir.path().join("summary.json");
    std::fs::write(&summary_file, serde_json::to_string(&summary).unwrap()).unwrap();
    assert_eq!(code(&hamdecomp(&["verify", p(&graph), p(&summary_file)])), 0);
}

#[test]
fn verify_rejects_tampered_candidate() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c5.txt");
    std::fs::write(&graph, "digraph 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let cand = dir.path().join("bad.json");
    std::fs::write(&cand, r#"{"cycles": [[0, 1, 2, 4, 3]]}"#).unwrap();
    let o = hamdecomp(&["verify", p(&graph), p(&cand), "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["violation"]["kind"], "missing-edge");
}

#[test]
fn exit_codes_follow_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = dir.path().join("k4.txt");
    assert_eq!(code(&hamdecomp(&["gen", "--family", "directed-complete", "--n", "4", "-o", p(&k4)])), 0);

    let o = hamdecomp(&["decompose", p(&k4), "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["outcome"], "proven-nonexistent");
    assert!(json(&o)["cycles"].as_array().unwrap().is_empty());

    let o = hamdecomp(&["decompose", p(&k4), "--fallback-budget", "3", "--json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["outcome"], "indeterminate");

    let o = hamdecomp(&["decompose", p(&k4), "--fallback", "none", "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["outcome"], "failed");

    let missing = dir.path().join("missing.txt");
    let o = hamdecomp(&["stats", p(&missing)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn check_expander_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let c10 = dir.path().join("c10.txt");
    let text: String = std::iter::once("digraph 10\n".to_string())
        .chain((0..10).map(|i| format!("{i} {}\n", (i + 1) % 10)))
        .collect();
    std::fs::write(&c10, text).unwrap();
    let o = hamdecomp(&["check-expander", p(&c10), "--nu", "0.1", "--tau", "0.1", "--json"]);
    assert_eq!(code(&o), 1);
    let cert = json(&o);
    assert_eq!(cert["verdict"], "fail");
    assert!(!cert["witness"].as_array().unwrap().is_empty());
    assert_eq!(cert["params"]["nu"], 0.1);

    let k10 = dir.path().join("k10.txt");
    hamdecomp(&["gen", "--family", "directed-complete", "--n", "10", "-o", p(&k10)]);
    let o = hamdecomp(&["check-expander", p(&k10), "--nu", "0.1", "--tau", "0.1", "--mode", "sample", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "pass-sampled");
}

#[test]
fn one_factorise_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let k6 = dir.path().join("k6.txt");
    hamdecomp(&["gen", "--family", "complete", "--n", "6", "-o", p(&k6)]);
    let o = hamdecomp(&["one-factorise", p(&k6), "--json"]);
    assert_eq!(code(&o), 0);
    let m = json(&o)["matchings"].as_array().unwrap().clone();
    assert_eq!(m.len(), 5);
    assert!(m.iter().all(|c| c.as_array().unwrap().len() == 3));

    let o = hamdecomp(&["stats", p(&k6), "--json"]);
    assert_eq!(code(&o), 0);
    let st = json(&o);
    assert_eq!((st["n"].as_u64(), st["edges"].as_u64(), st["regular"].as_u64()), (Some(6), Some(15), Some(5)));
}

#[test]
fn gen_prints_edge_list_and_json() {
    let o = hamdecomp(&["gen", "--family", "union-of-permutations", "--n", "10", "--s", "6", "--r", "2", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("digraph 10\n"));

    let o = hamdecomp(&[
        "gen", "--family", "union-of-permutations", "--n", "10", "--s", "6", "--r", "2", "--seed", "1", "--json",
    ]);
    let v = json(&o);
    assert_eq!(v["stats"]["regular"], 6);
    assert_eq!(v["graph"]["kind"], "directed");

    let o = hamdecomp(&["gen", "--family", "random-regular-multigraph", "--n", "5", "--s", "3"]);
    assert_eq!(code(&o), 1);
}
