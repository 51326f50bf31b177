use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sqpnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqpnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

const SMALL: &[(&str, &str)] = &[
    (
        "effdim",
        r#"{"family":"SQP","layer_widths":[2,2,1],"n_theta_samples":4,"n_x_samples":3}"#,
    ),
    (
        "capacity",
        r#"{"n_samples":6,"n_seeds":2,"n_epochs":2,"networks":[{"family":"HEA","layer_widths":[4],"hea_layers":1,"readout":{"mode":"CLASS_PROBE","qubits":[0,1]}}]}"#,
    ),
    ("classify", r#"{"family":"HANNOVER","layer_widths":[4,3],"n_epochs":2,"n_restarts":3}"#),
    (
        "unitary-learn",
        r#"{"family":"HEA","layer_widths":[2],"hea_layers":2,"n_train":4,"n_validation":2,"n_epochs":2,"n_restarts":2}"#,
    ),
    ("adiabatic-check", r#"{"n_inputs":[1],"n_draws":2,"ramp_times":[2.0]}"#),
];

#[test]
fn every_subcommand_is_deterministic_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    for (cmd, cfg) in SMALL {
        let cfg_path = write(tmp.path(), &format!("{cmd}.json"), cfg);
        let mut outputs = Vec::new();
        for jobs in ["1", "4", "4"] {
            let out = tmp.path().join(format!("{cmd}-{jobs}-{}", outputs.len()));
            let o = sqpnet(&[cmd, "--config", &cfg_path, "--seed", "11", "--jobs", jobs, "--quiet", "--out", out.to_str().unwrap()]);
            assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
            let m = manifest(&out);
            assert_eq!(m["status"], "complete");
            assert_eq!(m["seed"], 11);
            let files = csv_files(&out);
            assert!(!files.is_empty());
            let listed: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|d| d["path"].as_str().unwrap()).collect();
            assert_eq!(listed, files.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>());
            outputs.push(files);
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}: jobs 1 vs 4");
        assert_eq!(outputs[1], outputs[2], "{cmd}: repeated run");
    }
}

#[test]
fn selftest_passes() {
    let o = sqpnet(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn config_problems_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();

    let o = sqpnet(&["classify", "--config", "/nonexistent/cfg.json", "--out", out]);
    assert_eq!(o.status.code(), Some(1));

    let bad = write(tmp.path(), "bad.json", r#"{"learning_rate": 0}"#);
    let o = sqpnet(&["classify", "--config", &bad, "--out", out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(".learning_rate"));

    let foreign = write(tmp.path(), "foreign.json", r#"{"ramp_times": [1.0]}"#);
    let o = sqpnet(&["classify", "--config", &foreign, "--out", out]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(".ramp_times"));

    assert_eq!(sqpnet(&["classify", "--jobs", "0"]).status.code(), Some(1));
    assert_eq!(sqpnet(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn runtime_failure_exits_with_two_and_marks_the_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let iris = write(tmp.path(), "iris.csv", "a,b,c,d,species\n1,2,3,x,setosa\n");
    let cfg = write(
        tmp.path(),
        "cfg.json",
        &format!(r#"{{"iris_path":{},"n_epochs":1}}"#, serde_json::to_string(&iris).unwrap()),
    );
    let out = tmp.path().join("o");
    let o = sqpnet(&["classify", "--config", &cfg, "--quiet", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let m = manifest(&out);
    assert_eq!(m["status"], "failed");
    assert!(m["error"].as_str().unwrap().contains("row"));
}
