use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn persona(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persona")).args(args).output().expect("binary runs")
}

fn synth(dir: &Path) {
    let out = persona(&["synth", "--seed", "5", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn synth_then_run_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    let config = dir.path().join("config.toml");
    let out = persona(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["stages"].as_object().unwrap().len(), 8);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    let config = dir.path().join("config.toml");
    let config = config.to_str().unwrap();
    let mut reports = Vec::new();
    for _ in 0..2 {
        let o = persona(&["run", "--config", config]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        reports.push(fs::read(dir.path().join("out/report.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn single_stage_pulls_in_prerequisites() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    let config = dir.path().join("config.toml");
    let out = persona(&["graph", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["ingest.json", "affinity.json", "graph.json"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
    assert!(!dir.path().join("out/cluster.json").exists());
}

#[test]
fn missing_input_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path());
    fs::remove_file(dir.path().join("interactions.jsonl")).unwrap();
    let config = dir.path().join("config.toml");
    let out = persona(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("interactions"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "seed = 1\nexpansoin = 3\n").unwrap();
    let out = persona(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expansoin"));
}

#[test]
fn bad_arguments_exit_with_one() {
    assert_eq!(persona(&["run"]).status.code(), Some(1));
    assert_eq!(persona(&["--help"]).status.code(), Some(0));
}
