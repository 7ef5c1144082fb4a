use std::fs;

use afw_core::campaign::{
    emit_report, registry, run_campaign, run_campaign_with, CampaignConfig, CampaignReport, Execution, ReportFormat,
};
use afw_core::io::{read_density, read_spectrum, spectrum_csv, write_matrix};
use afw_core::stategen::{random_density, SampleKind, SampleSpec};
use afw_core::Error;

const CONFIG: &str = r#"{
    "bound_id": "prop1.truncation",
    "sample": {"kind": "generic", "dims": [4]},
    "samples": 25,
    "epsilon_grid": [0.02, 0.2],
    "seed": 7
}"#;

fn config() -> CampaignConfig {
    serde_json::from_str(CONFIG).unwrap()
}

fn without_stamp(mut r: CampaignReport) -> String {
    r.meta.timestamp.unix_seconds = 0;
    r.meta.timestamp.runtime_seconds = 0.0;
    r.to_json()
}

#[test]
fn config_defaults_and_validation() {
    let cfg = config();
    assert_eq!(cfg.tolerance(), 1e-9);
    assert!(cfg.validate().is_ok());
    let bare: CampaignConfig =
        serde_json::from_str(r#"{"bound_id":"mirsky","sample":{"kind":"generic","dims":[3]}}"#).unwrap();
    assert_eq!(bare.samples, 1000);
    assert_eq!(bare.epsilon_grid, vec![0.01, 0.1, 0.3, 0.7]);

    let mut bad = cfg.clone();
    bad.bound_id = "no.such.bound".into();
    let msg = bad.validate().unwrap_err().to_string();
    assert!(msg.contains("thm3a.rank"), "{msg}");

    let mut bad = cfg.clone();
    bad.sample = SampleSpec::new(SampleKind::QcPair, vec![2, 2]);
    let msg = bad.validate().unwrap_err().to_string();
    assert!(msg.contains("compatible kinds"), "{msg}");
    assert!(msg.contains("generic"), "{msg}");

    let mut bad = cfg;
    bad.tolerance = Some(-1.0);
    assert!(matches!(bad.validate(), Err(Error::Config(_))));
}

#[test]
fn reports_are_reproducible_modulo_timestamp() {
    let cfg = config();
    let a = run_campaign(&cfg).unwrap();
    let b = run_campaign_with(&cfg, Execution::Parallel(Some(2))).unwrap();
    let c = run_campaign_with(&cfg, Execution::Sequential).unwrap();
    assert_eq!(without_stamp(a.clone()), without_stamp(b));
    assert_eq!(without_stamp(a.clone()), without_stamp(c));
    assert_eq!(a.meta.samples_per_epsilon, 25);
    assert_eq!(a.rows.iter().map(|r| r.epsilon).collect::<Vec<_>>(), vec![0.02, 0.2]);
    assert!(a.passed());
}

#[test]
fn emitted_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_campaign(&config()).unwrap();

    let json = dir.path().join("r.json");
    emit_report(&report, ReportFormat::Json, &json).unwrap();
    let back = CampaignReport::from_json(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(back, report);
    let raw: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for key in [
        "seed",
        "version",
        "digest",
        "sample",
        "samples_per_epsilon",
        "tolerance",
        "timestamp",
    ] {
        assert!(raw["meta"].get(key).is_some(), "missing meta.{key}");
    }

    let csv = dir.path().join("r.csv");
    emit_report(&report, ReportFormat::Csv, &csv).unwrap();
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("epsilon,samples,violations,min_slack,median_slack,p95_tightness")
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "0.02");
    assert_eq!(first[1], "25");
    assert_eq!(first[2], "0");
    assert_eq!(lines.count(), 1);
}

#[test]
fn every_registered_bound_runs_a_tiny_campaign() {
    let defaults = [
        (SampleKind::Generic, vec![4]),
        (SampleKind::Generic, vec![2, 2]),
        (SampleKind::CommutingPair, vec![3, 3]),
        (SampleKind::CommutingPair, vec![5]),
        (SampleKind::MajorizedPair, vec![6]),
        (SampleKind::QcPair, vec![3, 3]),
        (SampleKind::EnergyConstrained, vec![5]),
    ];
    for entry in registry() {
        let (kind, dims) = defaults
            .iter()
            .find(|(k, d)| {
                let s = SampleSpec::new(*k, d.clone());
                entry.check(&s).is_ok() && (!entry.id.starts_with("prop10") || d == &vec![2, 2])
            })
            .unwrap_or_else(|| panic!("no default sample for {}", entry.id))
            .clone();
        let cfg = CampaignConfig::new(entry.id, SampleSpec::new(kind, dims), 3)
            .with_seed(5)
            .with_grid(vec![0.1]);
        let r = run_campaign_with(&cfg, Execution::Sequential).unwrap();
        assert!(r.passed(), "{}: {:?}", entry.id, r.rows);
    }
}

#[test]
fn matrix_and_spectrum_files() {
    let dir = tempfile::tempdir().unwrap();
    let rho = random_density(3, 2, 4).unwrap();
    let p = dir.path().join("rho.json");
    write_matrix(&p, rho.matrix()).unwrap();
    let back = read_density(&p).unwrap();
    assert!((back.matrix() - rho.matrix()).norm() < 1e-15);

    let s = dir.path().join("levels.csv");
    fs::write(&s, spectrum_csv(&[0.0, 1.0, 3.0])).unwrap();
    assert_eq!(read_spectrum(&s).unwrap().levels(3).unwrap(), vec![0.0, 1.0, 3.0]);
    let j = dir.path().join("osc.json");
    fs::write(&j, r#"{"family":"oscillator"}"#).unwrap();
    assert!(read_spectrum(&j).unwrap().len().is_none());
    fs::write(&j, "not json").unwrap();
    assert!(matches!(read_spectrum(&j), Err(Error::Format(_))));
}
