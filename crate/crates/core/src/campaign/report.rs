use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CampaignConfig;
use crate::bounds::BoundEvaluation;
use crate::error::{Error, Result};
use crate::stategen::SampleSpec;

/// Aggregate over the samples of one grid value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub epsilon: f64,
    pub samples: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub median_slack: f64,
    /// 95th percentile of `gap/bound`; absent when no sample has a nonzero
    /// denominator.
    pub p95_tightness: Option<f64>,
}

/// Nearest-rank percentile of a sorted slice.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

impl CampaignRow {
    /// Order-independent: every statistic is computed from sorted values.
    pub fn aggregate(epsilon: f64, evals: &[BoundEvaluation], tolerance: f64) -> Self {
        let violations = evals.iter().filter(|e| !e.passes(tolerance)).count();
        let mut slacks: Vec<f64> = evals.iter().map(|e| e.slack).collect();
        slacks.sort_by(f64::total_cmp);
        let mut tight: Vec<f64> = evals.iter().filter_map(|e| e.tightness()).collect();
        tight.sort_by(f64::total_cmp);
        let (min_slack, median_slack) = if slacks.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            (slacks[0], median(&slacks))
        };
        Self {
            epsilon,
            samples: evals.len(),
            violations,
            min_slack,
            median_slack,
            p95_tightness: (!tight.is_empty()).then(|| percentile(&tight, 0.95)),
        }
    }
}

/// Wall-clock data of one run. This is the only part of a report that
/// differs between reruns and is excluded from the digest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStamp {
    pub unix_seconds: u64,
    pub runtime_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub seed: u64,
    pub version: String,
    /// SHA-256 over the configuration, the rows and the inputs of every
    /// sample.
    pub digest: String,
    pub sample: SampleSpec,
    pub samples_per_epsilon: usize,
    pub tolerance: f64,
    pub timestamp: RunStamp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub bound_id: String,
    pub rows: Vec<CampaignRow>,
    pub meta: ReportMeta,
}

pub(super) fn evaluations_digest(evals: &[BoundEvaluation]) -> String {
    let mut hasher = Sha256::new();
    for e in evals {
        hasher.update(e.inputs_digest.as_bytes());
        hasher.update(e.bound_value.to_bits().to_le_bytes());
        hasher.update(e.measured_gap.to_bits().to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

#[derive(Serialize)]
struct DigestInput<'a> {
    bound_id: &'a str,
    version: &'a str,
    seed: u64,
    sample: &'a SampleSpec,
    tolerance: f64,
    rows: &'a [CampaignRow],
    cells: &'a [String],
}

impl CampaignReport {
    pub(super) fn assemble(cfg: &CampaignConfig, rows: Vec<CampaignRow>, cells: &[String], runtime: f64) -> Self {
        let version = env!("CARGO_PKG_VERSION").to_string();
        let input = DigestInput {
            bound_id: &cfg.bound_id,
            version: &version,
            seed: cfg.seed,
            sample: &cfg.sample,
            tolerance: cfg.tolerance(),
            rows: &rows,
            cells,
        };
        let canonical = serde_json::to_vec(&input).expect("digest input serializes");
        let digest = hex::encode(Sha256::digest(&canonical));
        let unix_seconds = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            bound_id: cfg.bound_id.clone(),
            rows,
            meta: ReportMeta {
                seed: cfg.seed,
                version,
                digest,
                sample: cfg.sample.clone(),
                samples_per_epsilon: cfg.samples,
                tolerance: cfg.tolerance(),
                timestamp: RunStamp {
                    unix_seconds,
                    runtime_seconds: runtime,
                },
            },
        }
    }

    pub fn total_violations(&self) -> usize {
        self.rows.iter().map(|r| r.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("campaign report: {e}")))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Error::Format(e.to_string());
        w.write_record([
            "epsilon",
            "samples",
            "violations",
            "min_slack",
            "median_slack",
            "p95_tightness",
        ])
        .map_err(fail)?;
        for r in &self.rows {
            w.write_record([
                r.epsilon.to_string(),
                r.samples.to_string(),
                r.violations.to_string(),
                r.min_slack.to_string(),
                r.median_slack.to_string(),
                r.p95_tightness.map(|t| t.to_string()).unwrap_or_default(),
            ])
            .map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!("unknown report format `{other}` (json or csv)"))),
        }
    }
}

pub fn emit_report(report: &CampaignReport, format: ReportFormat, path: &Path) -> Result<()> {
    let body = match format {
        ReportFormat::Json => report.to_json() + "\n",
        ReportFormat::Csv => report.to_csv()?,
    };
    let io = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        cause: e.to_string(),
    };
    let mut f = File::create(path).map_err(io)?;
    f.write_all(body.as_bytes()).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stategen::SampleKind;

    fn eval(slack: f64, bound: f64) -> BoundEvaluation {
        BoundEvaluation::upper("x", 0.1, bound, bound - slack, "d")
    }

    #[test]
    fn aggregation_statistics() {
        let evals: Vec<_> = [0.5, 0.1, -1e-12, 0.3, -0.2].iter().map(|&s| eval(s, 1.0)).collect();
        let row = CampaignRow::aggregate(0.1, &evals, 1e-9);
        assert_eq!(row.violations, 1);
        assert!((row.min_slack + 0.2).abs() < 1e-15);
        assert!((row.median_slack - 0.1).abs() < 1e-15);
        assert!((row.p95_tightness.unwrap() - 1.2).abs() < 1e-12);
        let mut reversed = evals.clone();
        reversed.reverse();
        assert_eq!(CampaignRow::aggregate(0.1, &reversed, 1e-9), row);
    }

    fn empty_report() -> CampaignReport {
        let cfg = CampaignConfig::new("thm3a.rank", SampleSpec::new(SampleKind::MajorizedPair, vec![3]), 1);
        CampaignReport::assemble(&cfg, Vec::new(), &[], 0.0)
    }

    #[test]
    fn empty_report_gives_header_only_csv() {
        let csv = empty_report().to_csv().unwrap();
        assert_eq!(csv, "epsilon,samples,violations,min_slack,median_slack,p95_tightness\n");
    }

    #[test]
    fn json_round_trip_and_io_errors() {
        let mut r = empty_report();
        r.rows.push(CampaignRow::aggregate(0.3, &[eval(0.25, 2.0)], 1e-9));
        let back = CampaignReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let err = emit_report(&r, ReportFormat::Json, Path::new("/nonexistent/dir/r.json")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/r.json"));
        assert_eq!("CSV".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
    }
}
