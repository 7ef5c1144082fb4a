//! `afw`: spot evaluation of the entropy, Gibbs and bound functions and
//! randomized verification campaigns.
//!
//! Exit status is 0 on success, 1 when a bound evaluation or campaign records
//! a violation and 2 on invalid input or configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use afw_core::bounds::DEFAULT_TOLERANCE;
use afw_core::campaign::{
    emit_report, eof_suite, lookup, registry, run_campaign_with, standard_suite, CampaignConfig, CampaignReport,
    Execution, ReportFormat, WORKERS_ENV,
};
use afw_core::eof::{convex_roof_eof, wootters_eof};
use afw_core::gibbs::solve_beta;
use afw_core::io::{read_density, read_spectrum};
use afw_core::operator::PositiveOperator;
use afw_core::scalar::{binary_entropy_family, eta, eta_up, g_function, h, h_up};
use afw_core::spectrum::SpectrumSpec;
use afw_core::stategen::{sample_rng, SampleKind, SampleSpec};

#[derive(Parser)]
#[command(
    name = "afw",
    version,
    about = "Continuity bounds for entropic quantities: evaluation and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate η, η↑, h, h↑ and g at a point.
    Scalar(ScalarArgs),
    /// Gibbs-state quantities of a Hamiltonian spectrum.
    #[command(subcommand)]
    Gibbs(GibbsCommand),
    /// Registered bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Entanglement of formation.
    #[command(subcommand)]
    Eof(EofCommand),
    /// Verification campaigns.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalarFn {
    Eta,
    EtaUp,
    H,
    HUp,
    G,
}

#[derive(Args)]
struct ScalarArgs {
    x: f64,
    /// Print a single function value instead of the whole family.
    #[arg(long = "fn", value_enum)]
    function: Option<ScalarFn>,
}

#[derive(Subcommand)]
enum GibbsCommand {
    /// Solve for the Gibbs state at mean energy E; prints β, Z, F and the tail mass.
    Solve {
        /// Spectrum as `{"family": …}` JSON or `index,eigenvalue` CSV.
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        energy: f64,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// List bound identifiers with their compatible sample kinds.
    List,
    /// Draw one sample and evaluate a bound on it.
    Eval(EvalArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    id: String,
    /// Sample kind; defaults to the first kind the bound accepts.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<SampleKind>,
    /// Dimensions, e.g. `6` or `3,3`.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    energy: Option<f64>,
    /// Spectrum JSON for energy-constrained samples.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum EofCommand {
    /// Convex-roof entanglement of formation of a state file.
    Compute {
        /// Density matrix as `{dim, re, im}` JSON.
        #[arg(long)]
        state: PathBuf,
        /// Local dimensions; defaults to `√d, √d`.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        /// Number of ensemble members; defaults to the total dimension.
        #[arg(long)]
        ensemble: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Run the campaign described by a JSON configuration.
    Run(RunArgs),
    /// Run the built-in suite covering every registered bound.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct ExecArgs {
    /// Worker threads; 0 or unset uses every core.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Evaluate samples on the calling thread.
    #[arg(long)]
    sequential: bool,
}

impl ExecArgs {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel(self.workers.filter(|&w| w > 0))
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Report path; without it the report is written to standard output
    /// unless the configuration names output files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the extension of `--out`, then JSON.
    #[arg(long, value_parser = parse_format)]
    format: Option<ReportFormat>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    exec: ExecArgs,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Include the entanglement-of-formation campaigns.
    #[arg(long)]
    eof: bool,
    /// Directory receiving one JSON report per campaign.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format, default_value = "json")]
    format: ReportFormat,
    #[command(flatten)]
    exec: ExecArgs,
}

fn parse_kind(s: &str) -> std::result::Result<SampleKind, String> {
    serde_json::from_value(json!(s)).map_err(|_| {
        "expected one of generic, commuting_pair, qc_pair, energy_constrained, majorized_pair, extremal_energy_pair"
            .to_string()
    })
}

fn parse_format(s: &str) -> std::result::Result<ReportFormat, String> {
    s.parse().map_err(|e: afw_core::Error| e.to_string())
}

enum Outcome {
    Clean,
    Violations,
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn scalar(args: &ScalarArgs) -> Result<Outcome> {
    let x = args.x;
    if let Some(f) = args.function {
        let v = match f {
            ScalarFn::Eta => eta(x),
            ScalarFn::EtaUp => eta_up(x),
            ScalarFn::H => h(x),
            ScalarFn::HUp => h_up(x),
            ScalarFn::G => g_function(x)?,
        };
        println!("{v}");
        return Ok(Outcome::Clean);
    }
    let mut out = json!({ "x": x });
    if let Ok(fam) = binary_entropy_family(x) {
        out["eta"] = json!(fam.eta);
        out["eta_up"] = json!(fam.eta_up);
        out["h"] = json!(fam.h);
        out["h_up"] = json!(fam.h_up);
    }
    if let Ok(v) = g_function(x) {
        out["g"] = json!(v);
    }
    if out.as_object().map_or(0, |o| o.len()) == 1 {
        bail!(afw_core::Error::Config(format!("no function is defined at x = {x}")));
    }
    print_json(&out)?;
    Ok(Outcome::Clean)
}

fn gibbs(cmd: &GibbsCommand) -> Result<Outcome> {
    let GibbsCommand::Solve { spectrum, energy } = cmd;
    let spec = read_spectrum(spectrum)?;
    let sol = solve_beta(&spec, *energy)?;
    print_json(&json!({
        "E": sol.energy,
        "beta": sol.beta,
        "Z": sol.z,
        "ln_Z": sol.ln_z,
        "F": sol.entropy,
        "tail_mass": sol.tail_mass,
    }))?;
    Ok(Outcome::Clean)
}

fn bounds(cmd: &BoundsCommand) -> Result<Outcome> {
    match cmd {
        BoundsCommand::List => {
            let mut out = std::io::stdout().lock();
            for e in registry() {
                let kinds: Vec<&str> = e.kinds.iter().map(|k| k.name()).collect();
                match writeln!(out, "{:<32} {:<48} {}", e.id, kinds.join(","), e.summary) {
                    Err(err) if err.kind() == std::io::ErrorKind::BrokenPipe => break,
                    other => other?,
                }
            }
            Ok(Outcome::Clean)
        }
        BoundsCommand::Eval(args) => {
            let entry = lookup(&args.id)?;
            let kind = args.kind.unwrap_or(entry.kinds[0]);
            let mut spec = SampleSpec::new(kind, args.dims.clone());
            spec.target_epsilon = args.epsilon;
            spec.m = args.m;
            spec.a = args.a;
            spec.c = args.c;
            spec.k = args.k;
            spec.energy = args.energy;
            if let Some(p) = &args.spectrum {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let s: SpectrumSpec = serde_json::from_str(&text)
                    .map_err(|e| afw_core::Error::Format(format!("spectrum JSON {}: {e}", p.display())))?;
                spec.spectrum = Some(s);
            }
            spec.validate()?;
            entry.check(&spec)?;
            let tol = args.tolerance.unwrap_or(DEFAULT_TOLERANCE);
            let evals = entry.evaluate_all(&spec, args.epsilon, &mut sample_rng(args.seed, 0))?;
            let failed = evals.iter().filter(|e| !e.passes(tol)).count();
            print_json(&json!({ "sample": spec, "tolerance": tol, "violations": failed, "evaluations": evals }))?;
            Ok(if failed == 0 {
                Outcome::Clean
            } else {
                Outcome::Violations
            })
        }
    }
}

fn default_dims(dim: usize) -> Result<(usize, usize)> {
    let r = (dim as f64).sqrt().round() as usize;
    if r * r == dim {
        Ok((r, r))
    } else {
        Err(anyhow!(afw_core::Error::Config(format!(
            "dimension {dim} is not a square; pass --dims"
        ))))
    }
}

fn eof(cmd: &EofCommand) -> Result<Outcome> {
    let EofCommand::Compute {
        state,
        dims,
        restarts,
        ensemble,
        seed,
    } = cmd;
    let rho = read_density(state)?;
    let dims = match dims.as_deref() {
        None => default_dims(rho.dim())?,
        Some([a, b]) => (*a, *b),
        Some(other) => bail!(afw_core::Error::Config(format!(
            "--dims needs two values, got {other:?}"
        ))),
    };
    let k = ensemble.unwrap_or(rho.dim());
    let roof = convex_roof_eof(&rho, dims, k, *restarts, *seed)?;
    let vals = &roof.restart_values;
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let std = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let mut out = json!({
        "value": roof.value,
        "ensemble_size": roof.ensemble.len(),
        "dims": [dims.0, dims.1],
        "restarts": {
            "count": roof.restarts,
            "best": roof.best_restart,
            "min": vals.iter().copied().fold(f64::INFINITY, f64::min),
            "max": vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            "mean": mean,
            "std": std,
        },
        "stationarity": roof.stationarity,
        "converged": roof.converged,
    });
    if dims == (2, 2) {
        out["wootters"] = json!(wootters_eof(&rho)?);
    }
    print_json(&out)?;
    Ok(Outcome::Clean)
}

fn summarize(report: &CampaignReport) {
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    eprintln!(
        "{verdict} {} [{}] violations={} digest={}",
        report.bound_id,
        report.meta.sample.kind.name(),
        report.total_violations(),
        &report.meta.digest[..16]
    );
    for r in &report.rows {
        eprintln!(
            "  eps={:<6} samples={:<6} violations={:<4} min_slack={:+.3e} median_slack={:+.3e}",
            r.epsilon, r.samples, r.violations, r.min_slack, r.median_slack
        );
    }
}

fn format_for(path: &Path, explicit: Option<ReportFormat>) -> ReportFormat {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
        _ => ReportFormat::Json,
    })
}

fn verify_run(args: &RunArgs) -> Result<Outcome> {
    let text = fs::read_to_string(&args.config).map_err(|e| afw_core::Error::Io {
        path: args.config.display().to_string(),
        cause: e.to_string(),
    })?;
    let mut cfg: CampaignConfig =
        serde_json::from_str(&text).map_err(|e| afw_core::Error::Config(format!("{}: {e}", args.config.display())))?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.samples {
        cfg.samples = n;
    }
    if let Some(t) = args.tolerance {
        cfg.tolerance = Some(t);
    }
    let report = run_campaign_with(&cfg, args.exec.execution())?;
    summarize(&report);
    let mut written = false;
    if let Some(p) = &args.out {
        emit_report(&report, format_for(p, args.format), p)?;
        written = true;
    }
    if let Some(p) = &cfg.output.json {
        emit_report(&report, ReportFormat::Json, p)?;
        written = true;
    }
    if let Some(p) = &cfg.output.csv {
        emit_report(&report, ReportFormat::Csv, p)?;
        written = true;
    }
    if !written {
        match args.format.unwrap_or(ReportFormat::Json) {
            ReportFormat::Json => println!("{}", report.to_json()),
            ReportFormat::Csv => print!("{}", report.to_csv()?),
        }
    }
    Ok(if report.passed() {
        Outcome::Clean
    } else {
        Outcome::Violations
    })
}

fn verify_suite(args: &SuiteArgs) -> Result<Outcome> {
    let mut configs = standard_suite(args.samples, args.seed);
    if args.eof {
        configs.extend(eof_suite(args.samples, args.seed));
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| afw_core::Error::Io {
            path: dir.display().to_string(),
            cause: e.to_string(),
        })?;
    }
    let ext = match args.format {
        ReportFormat::Json => "json",
        ReportFormat::Csv => "csv",
    };
    let mut failed = 0;
    for (i, mut cfg) in configs.into_iter().enumerate() {
        cfg.tolerance = args.tolerance;
        let report = run_campaign_with(&cfg, args.exec.execution())?;
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {:<30} {:<20} dims={:?} violations={} min_slack={:+.3e}",
            report.bound_id,
            report.meta.sample.kind.name(),
            report.meta.sample.dims,
            report.total_violations(),
            report.rows.iter().map(|r| r.min_slack).fold(f64::INFINITY, f64::min)
        );
        if let Some(dir) = &args.out {
            let path = dir.join(format!("{i:02}-{}.{ext}", report.bound_id));
            emit_report(&report, args.format, &path)?;
        }
        failed += usize::from(!report.passed());
    }
    Ok(if failed == 0 {
        Outcome::Clean
    } else {
        Outcome::Violations
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Scalar(a) => scalar(a),
        Command::Gibbs(c) => gibbs(c),
        Command::Bounds(c) => bounds(c),
        Command::Eof(c) => eof(c),
        Command::Verify(VerifyCommand::Run(a)) => verify_run(a),
        Command::Verify(VerifyCommand::Suite(a)) => verify_suite(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
