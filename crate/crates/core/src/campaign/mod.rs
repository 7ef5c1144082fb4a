//! Randomized verification campaigns.
//!
//! A campaign draws `samples` inputs per grid value of `ε` from a
//! [`SampleSpec`], evaluates one registered bound on each and aggregates the
//! slacks. Sample `i` at grid position `j` always uses the random stream
//! `(j << 32) | i` of the campaign seed, so the report does not depend on how
//! the work is spread over threads.

mod registry;
mod report;
mod suite;

pub use registry::{lookup, registry, BoundEntry};
pub use report::{emit_report, CampaignReport, CampaignRow, ReportFormat, ReportMeta, RunStamp};
pub use suite::{eof_suite, standard_suite};

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundEvaluation, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::stategen::{sample_rng, SampleSpec};

/// Environment variable holding the default number of worker threads.
pub const WORKERS_ENV: &str = "AFW_WORKERS";

pub fn default_grid() -> Vec<f64> {
    vec![0.01, 0.1, 0.3, 0.7]
}

fn default_samples() -> usize {
    1000
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub bound_id: String,
    pub sample: SampleSpec,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_grid")]
    pub epsilon_grid: Vec<f64>,
    /// Relative tolerance of the PASS rule `slack ≥ −tol·max(1, |bound|)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default)]
    pub seed: u64,
}

impl CampaignConfig {
    pub fn new(bound_id: impl Into<String>, sample: SampleSpec, samples: usize) -> Self {
        Self {
            bound_id: bound_id.into(),
            sample,
            samples,
            epsilon_grid: default_grid(),
            tolerance: None,
            output: OutputPaths::default(),
            seed: 0,
        }
    }

    pub fn with_grid(mut self, grid: Vec<f64>) -> Self {
        self.epsilon_grid = grid;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    pub fn validate(&self) -> Result<&'static BoundEntry> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.epsilon_grid.is_empty() {
            return Err(Error::Config("epsilon_grid is empty".into()));
        }
        if let Some(bad) = self.epsilon_grid.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
            return Err(Error::Config(format!("epsilon_grid value {bad} not in (0, 1]")));
        }
        let tol = self.tolerance();
        if !(tol >= 0.0) || !tol.is_finite() {
            return Err(Error::Config(format!("tolerance {tol} must be a nonnegative number")));
        }
        let entry = lookup(&self.bound_id)?;
        entry.check(&self.sample)?;
        Ok(entry)
    }
}

/// How samples are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Data-parallel over samples; `None` uses the worker count from
    /// [`WORKERS_ENV`] or, failing that, every available core. Without the
    /// `parallel` feature this runs sequentially.
    Parallel(Option<usize>),
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel(None)
        } else {
            Execution::Sequential
        }
    }
}

/// Worker count requested through [`WORKERS_ENV`], if any.
pub fn env_workers() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

fn stream(grid_index: usize, sample: usize) -> u64 {
    ((grid_index as u64) << 32) | sample as u64
}

fn evaluate_sample(
    entry: &BoundEntry,
    cfg: &CampaignConfig,
    grid_index: usize,
    eps: f64,
    i: usize,
) -> Result<BoundEvaluation> {
    let mut rng = sample_rng(cfg.seed, stream(grid_index, i));
    entry.evaluate(&cfg.sample, eps, &mut rng).map_err(|e| match e {
        Error::Config(_) => e,
        other => Error::Generation(format!("sample {i} at ε = {eps}: {other}")),
    })
}

fn run_cell(
    entry: &BoundEntry,
    cfg: &CampaignConfig,
    grid_index: usize,
    eps: f64,
    exec: Execution,
) -> Result<Vec<BoundEvaluation>> {
    let one = |i: usize| evaluate_sample(entry, cfg, grid_index, eps, i);
    match exec {
        Execution::Sequential => (0..cfg.samples).map(one).collect(),
        Execution::Parallel(workers) => crate::par::map(cfg.samples, workers, one)?.into_iter().collect(),
    }
}

/// Runs the campaign with the default [`Execution`].
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run_campaign_with(cfg, Execution::default())
}

pub fn run_campaign_with(cfg: &CampaignConfig, exec: Execution) -> Result<CampaignReport> {
    let entry = cfg.validate()?;
    let start = Instant::now();
    let tol = cfg.tolerance();
    let mut rows = Vec::with_capacity(cfg.epsilon_grid.len());
    let mut digests = Vec::with_capacity(cfg.epsilon_grid.len());
    for (j, &eps) in cfg.epsilon_grid.iter().enumerate() {
        let evals = run_cell(entry, cfg, j, eps, exec)?;
        rows.push(CampaignRow::aggregate(eps, &evals, tol));
        digests.push(report::evaluations_digest(&evals));
    }
    Ok(CampaignReport::assemble(
        cfg,
        rows,
        &digests,
        start.elapsed().as_secs_f64(),
    ))
}
