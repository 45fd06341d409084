use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kanon_core::io::{save_graph, GraphFormat};
use kanon_core::{samples, Graph};
use serde_json::Value;

fn kanon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kanon")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, g: &Graph) -> PathBuf {
    let p = dir.join(name);
    save_graph(g, &p, GraphFormat::Metis, 0).unwrap();
    p
}

#[test]
fn anonymize_paw_emits_two_edges() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "paw.graph", &samples::paw());
    let edges = dir.path().join("s.txt");
    let out = kanon(&["anonymize", g.to_str().unwrap(), "--k", "4", "--emit-edges", edges.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = stdout_json(&out);
    let r = &reports[0];
    assert_eq!(r["graph"], "paw");
    assert_eq!(r["lower_bound_edges"], 2);
    assert_eq!(r["upper_bound_edges"], 2);
    assert_eq!(r["optimal"], true);
    let text = std::fs::read_to_string(&edges).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);

    let v = kanon(&["verify", g.to_str().unwrap(), edges.to_str().unwrap(), "--k", "4"]);
    assert!(v.status.success());
    assert_eq!(stdout_json(&v)["valid"], true);
}

#[test]
fn verify_rejects_existing_edge() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "t.graph", &samples::two_targets());
    let edges = dir.path().join("bad.txt");
    // a degree-one vertex and the degree-five vertex are already adjacent
    std::fs::write(&edges, "0 3\n").unwrap();
    let v = kanon(&["verify", g.to_str().unwrap(), edges.to_str().unwrap(), "--k", "2"]);
    assert_eq!(v.status.code(), Some(1));
    let report = stdout_json(&v);
    assert_eq!(report["valid"], false);
    assert_eq!(report["violations"][0]["kind"], "existing-edge");
}

#[test]
fn verify_accepts_empty_set_on_anonymous_graph() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let g = write(dir.path(), "c4.graph", &c4);
    let edges = dir.path().join("empty.txt");
    std::fs::write(&edges, "").unwrap();
    let v = kanon(&["verify", g.to_str().unwrap(), edges.to_str().unwrap(), "--k", "4"]);
    assert!(v.status.success());
}

#[test]
fn generate_then_sweep_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("ba.txt");
    let out = kanon(&[
        "generate", "--steps", "200", "--m0", "2", "--seed", "3", "--format", "edgelist", "--index-base", "1", "-o",
        g.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let edges = dir.path().join("s.txt");
    let out = kanon(&[
        "anonymize", g.to_str().unwrap(), "--format", "edgelist", "--index-base", "1", "--k-list", "2,3",
        "--time-limit", "30", "--out", "csv", "--emit-edges", edges.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("graph,n,m,delta,k,"));
    assert!(rows[1].starts_with("ba,203,403,"));
    for k in [2, 3] {
        let path = dir.path().join(format!("s.k{k}.txt"));
        let v = kanon(&[
            "verify", g.to_str().unwrap(), path.to_str().unwrap(), "--k", &k.to_string(), "--format", "edgelist",
            "--index-base", "1",
        ]);
        assert!(v.status.success(), "k={k}");
    }
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "jump.graph", &samples::jump_required());
    let run = || {
        let out = kanon(&["anonymize", g.to_str().unwrap(), "--k-list", "2,3", "--seed", "7"]);
        let mut v = stdout_json(&out);
        for r in v.as_array_mut().unwrap() {
            r["phase1_time_ms"] = Value::Null;
            r["phase2_time_ms"] = Value::Null;
        }
        v
    };
    let a = run();
    assert_eq!(a, run());
    assert_eq!(a[0]["upper_bound_edges"], 3);
}

#[test]
fn bad_arguments_fail_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "paw.graph", &samples::paw());
    let out = kanon(&["anonymize", g.to_str().unwrap(), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2"));
    let out = kanon(&["anonymize", "/nonexistent.graph", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = kanon(&["anonymize", g.to_str().unwrap(), "--k", "2", "--k-list", "2,3"]);
    assert!(!out.status.success());
}

#[test]
fn oracle_subcommands() {
    let out = kanon(&["oracle", "kdsa", "--blocks", "0,4,1", "--k", "2"]);
    assert_eq!(stdout_json(&out)["min_cost"], 1);
    let out = kanon(&["oracle", "realizable", "--degrees", "3,3,1,1"]);
    assert_eq!(stdout_json(&out)["realizable"], false);
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "paw.graph", &samples::paw());
    let out = kanon(&["oracle", "min-insertion", g.to_str().unwrap(), "--k", "4"]);
    assert_eq!(stdout_json(&out)["edges"], 2);
}
