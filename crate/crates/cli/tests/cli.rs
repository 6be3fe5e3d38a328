//! End-to-end runs of the `hdx` binary: exit codes, certificate determinism,
//! and export round-trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hdx_core::spectral::{spectral_report, Solver, WeightedGraph};

fn hdx(dir: &Path, args: &[&str]) -> Output {
    let out = dir.join("out");
    let cache = dir.join("cache");
    Command::new(env!("CARGO_BIN_EXE_hdx"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .arg("--cache")
        .arg(&cache)
        .output()
        .expect("binary should launch")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn report_all_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["report-all", "--p", "2", "--s", "1", "--d", "3"];

    let first = hdx(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let cert_path = dir.path().join("out/report-all_p2_s1_d3.json");
    let first_json = fs::read(&cert_path).unwrap();

    let second = hdx(dir.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    let second_json = fs::read(&cert_path).unwrap();

    assert_eq!(first_json, second_json, "reruns must be byte-identical");
    assert!(stdout(&first).contains("[PASS]"));
    assert!(!stdout(&first).contains("[FAIL]"));

    // The JSON parses and agrees with the exit status.
    let parsed: serde_json::Value = serde_json::from_slice(&first_json).unwrap();
    assert_eq!(parsed["pass"], serde_json::Value::Bool(true));
    assert_eq!(parsed["command"], "report-all");
    assert!(parsed["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn export_without_a_cache_names_the_build_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = hdx(
        dir.path(),
        &["export", "--what", "graph", "--p", "2", "--s", "1", "--d", "3"],
    );
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(
        err.contains("hdx build --p 2 --s 1 --d 3"),
        "error should say how to recover: {err}"
    );
}

#[test]
fn build_then_export_round_trips_the_skeleton() {
    let dir = tempfile::tempdir().unwrap();
    let built = hdx(dir.path(), &["build", "--p", "2", "--s", "1", "--d", "3"]);
    assert_eq!(built.status.code(), Some(0), "stderr: {}", stderr(&built));

    for what in ["group", "complex", "graph"] {
        let out = hdx(
            dir.path(),
            &["export", "--what", what, "--p", "2", "--s", "1", "--d", "3"],
        );
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }

    let skeleton = dir.path().join("out/skeleton_p2_s1_d3.txt");
    let g = WeightedGraph::read_edge_list(fs::read(&skeleton).unwrap().as_slice()).unwrap();
    assert_eq!(g.n(), 63);

    // The file carries the full weighted graph: its spectrum must match a
    // fresh in-process build.
    let x = hdx_core::complex::build_complex(2, 1, 3, 1 << 22).unwrap();
    let fresh = x
        .links_at_level(-1)
        .unwrap()
        .remove(0)
        .1
        .skeleton_graph()
        .unwrap();
    let from_file = spectral_report(&g, "file", Solver::Dense, 1e-11).unwrap();
    let rebuilt = spectral_report(&fresh, "fresh", Solver::Dense, 1e-11).unwrap();
    assert!((from_file.lambda_2 - rebuilt.lambda_2).abs() < 1e-9);
    assert!((from_file.lambda_min - rebuilt.lambda_min).abs() < 1e-9);

    let labels = dir.path().join("out/skeleton_p2_s1_d3.labels.json");
    let sidecar: serde_json::Value =
        serde_json::from_slice(&fs::read(&labels).unwrap()).unwrap();
    assert_eq!(sidecar["labels"].as_array().unwrap().len(), 63);

    let faces = fs::read_to_string(dir.path().join("out/faces_p2_s1_d3.txt")).unwrap();
    assert!(!faces.is_empty());
}

#[test]
fn tiny_cap_is_infeasible_not_a_crash() {
    let dir = tempfile::tempdir().unwrap();
    let out = hdx(
        dir.path(),
        &["build", "--p", "2", "--s", "1", "--d", "3", "--cap", "10"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("cap"));
}

#[test]
fn trickle_certifies_the_smallest_complex() {
    let dir = tempfile::tempdir().unwrap();
    let out = hdx(dir.path(), &["trickle", "--p", "2", "--s", "1", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("descent ceiling"));
    assert!(text.contains("descent floor"));
}

#[test]
fn trickle_needs_three_types() {
    let dir = tempfile::tempdir().unwrap();
    let out = hdx(dir.path(), &["trickle", "--p", "2", "--s", "1", "--d", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("needs a 2-dimensional complex"));
}
