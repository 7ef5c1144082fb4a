use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn afw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afw"))
        .args(args)
        .env_remove("AFW_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("campaign.json");
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

const CONFIG: &str = r#"{"bound_id":"thm3a.rank","sample":{"kind":"majorized_pair","dims":[5]},"samples":30,"epsilon_grid":[0.01,0.1,0.3]}"#;

#[test]
fn scalar_values() {
    let out = afw(&["scalar", "0.5"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["h"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
    assert!((v["g"].as_f64().unwrap() - (1.5 * 1.5f64.ln() - 0.5 * 0.5f64.ln())).abs() < 1e-15);
    let out = afw(&["scalar", "3", "--fn", "g"]);
    let g: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((g - (4.0 * 4f64.ln() - 3.0 * 3f64.ln())).abs() < 1e-14);
    assert_eq!(afw(&["scalar", "--", "-1"]).status.code(), Some(2));
}

#[test]
fn gibbs_solve_oscillator() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("osc.json");
    fs::write(&p, r#"{"family":"oscillator"}"#).unwrap();
    let out = afw(&["gibbs", "solve", "--spectrum", p.to_str().unwrap(), "--energy", "2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["beta"].as_f64().unwrap() - 1.5f64.ln()).abs() < 1e-10);
    assert!((v["F"].as_f64().unwrap() - (3.0 * 3f64.ln() - 2.0 * 2f64.ln())).abs() < 1e-8);
    assert!(v["Z"].as_f64().unwrap() > 0.0);
    assert!(v.get("tail_mass").is_some());

    let csv = dir.path().join("levels.csv");
    fs::write(&csv, "index,eigenvalue\n0,0\n1,1\n").unwrap();
    let out = afw(&[
        "gibbs",
        "solve",
        "--spectrum",
        csv.to_str().unwrap(),
        "--energy",
        "0.25",
    ]);
    let v = stdout_json(&out);
    assert!((v["beta"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-10);

    let out = afw(&["gibbs", "solve", "--spectrum", "/nonexistent.json", "--energy", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent.json"));
}

#[test]
fn bounds_eval_and_incompatible_kind() {
    let out = afw(&[
        "bounds",
        "eval",
        "--id",
        "prop1.truncation",
        "--dims",
        "4",
        "--epsilon",
        "0.2",
        "--seed",
        "9",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["evaluations"][0]["bound_id"], "prop1.truncation");

    let out = afw(&[
        "bounds",
        "eval",
        "--id",
        "prop7.qce.rank",
        "--kind",
        "generic",
        "--dims",
        "3,3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("compatible kinds: qc_pair"), "{err}");

    let list = afw(&["bounds", "list"]);
    let text = String::from_utf8(list.stdout).unwrap();
    assert!(text.lines().count() >= 50);
    assert!(text.contains("prop10.eof.fidelity"));
}

#[test]
fn eof_compute_bell_state() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bell.json");
    let mut re = vec![0.0; 16];
    for k in [0, 3, 12, 15] {
        re[k] = 0.5;
    }
    fs::write(
        &p,
        serde_json::json!({ "dim": 4, "re": re, "im": vec![0.0; 16] }).to_string(),
    )
    .unwrap();
    let out = afw(&["eof", "compute", "--state", p.to_str().unwrap(), "--restarts", "5"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-9);
    assert!((v["wootters"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
    assert_eq!(v["ensemble_size"], 4);
    assert_eq!(v["restarts"]["count"], 5);

    fs::write(&p, r#"{"dim":3,"re":[1,0,0,0,0,0,0,0,0],"im":[0,0,0,0,0,0,0,0,0]}"#).unwrap();
    let out = afw(&["eof", "compute", "--state", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let json = dir.path().join("r.json");
    let out = afw(&[
        "verify",
        "run",
        "--config",
        &cfg,
        "--seed",
        "3",
        "--out",
        json.to_str().unwrap(),
    ]);
    let report: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let violations: u64 = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["violations"].as_u64().unwrap())
        .sum();
    assert_eq!(out.status.success(), violations == 0);
    assert_eq!(report["bound_id"], "thm3a.rank");
    assert_eq!(report["meta"]["seed"], 3);
    assert_eq!(report["rows"].as_array().unwrap().len(), 3);

    let csv = dir.path().join("r.csv");
    let out = afw(&[
        "verify",
        "run",
        "--config",
        &cfg,
        "--samples",
        "5",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("epsilon,samples,violations,min_slack,median_slack,p95_tightness\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("0.01,5,0,"));
}

#[test]
fn verify_run_is_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let run = |workers: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_afw"))
            .args(["verify", "run", "--config", &cfg])
            .env("AFW_WORKERS", workers)
            .output()
            .unwrap();
        assert!(out.status.success());
        let v = stdout_json(&out);
        (v["meta"]["digest"].clone(), v["rows"].clone())
    };
    assert_eq!(run("1"), run("3"));
    let seq = stdout_json(&afw(&["verify", "run", "--config", &cfg, "--sequential"]));
    assert_eq!(seq["meta"]["digest"], run("2").0);
}

#[test]
fn verify_run_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = afw(&["verify", "run", "--config", &cfg, "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("samples"));

    let bad = write_config(
        dir.path(),
        r#"{"bound_id":"thm3a.rank","sample":{"kind":"generic","dims":[4]}}"#,
    );
    let out = afw(&["verify", "run", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("compatible kinds: majorized_pair"));

    let out = afw(&["verify", "run", "--config", &cfg, "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = afw(&["verify", "run", "--config", "/nonexistent/campaign.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite_small() {
    let dir = tempfile::tempdir().unwrap();
    let out = afw(&[
        "verify",
        "suite",
        "--samples",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
        "--eof",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), text.lines().count());
}
