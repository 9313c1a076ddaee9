use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ffzne::circuit::parse_qasm;
use serde_json::Value;

fn ffzne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffzne")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = ffzne(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn error_of(out: &Output) -> Value {
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is json");
    err["error"].clone()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bench_prints_parseable_qasm() {
    let text = ok(&["bench", "--family", "vqe", "--qubits", "4", "--layers", "2"]);
    let c = parse_qasm(&text).unwrap();
    assert_eq!(c.width(), 4);
    assert_eq!(c, ffzne::Benchmark::vqe(4, 2).circuit().unwrap());
}

#[test]
fn noiseless_simulation_of_ghz() {
    let v: Value = serde_json::from_str(&ok(&["simulate", "--family", "ghz", "--qubits", "3", "--noise", "off", "--observable", "ZZI"])).unwrap();
    let probs: Vec<f64> = serde_json::from_value(v["distribution"].clone()).unwrap();
    assert_eq!(probs.len(), 8);
    assert!((probs[0] - 0.5).abs() < 1e-12 && (probs[7] - 0.5).abs() < 1e-12);
    assert!((v["expectation"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["esp"].as_f64(), Some(1.0));
}

#[test]
fn simulate_reads_qasm_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bell.qasm");
    fs::write(&file, "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nx q[0];\ncx q[0],q[1];\n").unwrap();
    let v: Value = serde_json::from_str(&ok(&["simulate", "--qasm", path(&file), "--noise", "off"])).unwrap();
    assert_eq!(v["distribution"][3].as_f64(), Some(1.0));
}

#[test]
fn mitigate_writes_csv_and_json_mirror() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let csv = ok(&[
        "mitigate", "--family", "hs", "--qubits", "4", "--noise", "depol",
        "--method", "noisy", "--method", "rzne,rzne_topk", "--top-k", "4",
        "--json", path(&json),
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "benchmark,qubits,esp,latency_ns,method,expectation,abe,abr,fidelity,seed");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].contains(",rzne,"));

    let reports: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for m in reports[0]["methods"].as_array().unwrap() {
        let probs: Vec<f64> = serde_json::from_value(m["distribution"].clone()).unwrap();
        assert_eq!(probs.len(), 16);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    assert_eq!(ok(&["report", path(&json)]), csv);
    assert!(ok(&["report", path(&json), "--format", "table"]).contains("rzne_topk"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    fs::write(&cfg, r#"{"benchmark": {"family": "qaoa", "qubits": 4}, "methods": ["noisy"], "seed": 5}"#).unwrap();
    let csv = ok(&["mitigate", "--config", path(&cfg), "--seed", "9", "--qubits", "6"]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "qaoa");
    assert_eq!(row[1], "6");
    assert_eq!(row[4], "noisy");
    assert_eq!(row[9], "9");
}

#[test]
fn sampled_sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    fs::write(
        &cfg,
        r#"{"benchmarks": [{"family": "ghz", "qubits": 3}, {"family": "vqe", "qubits": 4, "layers": 1}],
            "settings": {"methods": ["noisy", "rzne", "slzne_topk"]}}"#,
    )
    .unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&["sweep", "--config", path(&cfg), "--sample", "--shots", "4096", "--seed", "11", "--out", path(&out)]);
        fs::read(out).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 7);
}

#[test]
fn cut_emits_every_variant() {
    let dir = tempfile::tempdir().unwrap();
    let v: Value = serde_json::from_str(&ok(&[
        "cut", "--family", "ghz", "--qubits", "5", "--max-cuts", "2", "--emit-dir", path(dir.path()),
    ]))
    .unwrap();
    let k = v["plan"]["cuts"].as_array().unwrap().len() as u32;
    assert!(k >= 1);
    let up = v["upstream"].as_array().unwrap();
    let down = v["downstream"].as_array().unwrap();
    assert_eq!(up.len(), 3usize.pow(k));
    assert_eq!(down.len(), 4usize.pow(k));
    for entry in up.iter().chain(down) {
        let text = fs::read_to_string(dir.path().join(entry["file"].as_str().unwrap())).unwrap();
        assert!(parse_qasm(&text).unwrap().width() <= 5);
    }
    assert!(dir.path().join("plan.json").exists());
}

#[test]
fn failures_are_reported_as_json() {
    let e = error_of(&ffzne(&["mitigate", "--shots", "0"]));
    assert_eq!(e["kind"], "invalid_config");

    let e = error_of(&ffzne(&["mitigate", "--family", "qaoa", "--qubits", "4", "--observable", "XZZZ"]));
    assert_eq!(e["kind"], "non_diagonal_observable");

    let e = error_of(&ffzne(&["cut", "--family", "qaoa", "--qubits", "4", "--max-cuts", "1"]));
    assert_eq!(e["kind"], "no_cut_within_budget");

    let e = error_of(&ffzne(&["report", "/definitely/missing.json"]));
    assert_eq!(e["kind"], "io");

    let out = ffzne(&["mitigate", "--method", "magic"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["kind"], "usage");
}
