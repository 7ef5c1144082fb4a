//! Acceptance run: prints one `[PASS]`/`[FAIL] criterion N` line per
//! criterion and exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use afw_core::bounds::{
    energy_scb, entropy_joint_support_cb, entropy_scb_energy, entropy_scb_rank, entropy_truncation_scb, find,
    mi_commuting_energy_cb, mi_commuting_rank_cb, qce_commuting_cb, qce_qc_scb, qce_qc_truncation_and_llb,
    re_dominated_scb, BoundEvaluation, DominatedMode, MarginalConstraint,
};
use afw_core::campaign::{
    eof_suite, run_campaign, run_campaign_with, standard_suite, CampaignConfig, CampaignReport, Execution,
};
use afw_core::eof::{convex_roof_eof, wootters_eof};
use afw_core::gibbs::{f_of_e, solve_beta};
use afw_core::operator::{DensityMatrix, PositiveOperator};
use afw_core::scalar::g;
use afw_core::spectrum::HamiltonianSpectrum;
use afw_core::stategen::{extremal_energy_pair, qc_pair, random_density_with, random_state, sample_rng, QcState};
use afw_core::Result;

const SEED: u64 = 2024;
const GRID: [f64; 4] = [0.01, 0.1, 0.3, 0.7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn gibbs_closed_forms() -> Outcome {
    let start = Instant::now();
    let osc = HamiltonianSpectrum::oscillator();
    let truncated = HamiltonianSpectrum::explicit((0..4096).map(|k| k as f64).collect()).expect("levels");
    let mut beta_err: f64 = 0.0;
    let mut f_err: f64 = 0.0;
    for e in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let beta = solve_beta(&osc, e).expect("solvable").beta;
        beta_err = beta_err.max((beta - (1.0 + 1.0 / e).ln()).abs());
        for spec in [&osc, &truncated] {
            f_err = f_err.max((f_of_e(spec, e).expect("solvable") - g(e)).abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        beta_err <= 1e-10 && f_err <= 1e-8 && elapsed < Duration::from_secs(1),
        format!(
            "max |β − ln(1+1/E)| = {beta_err:.2e}, max |F − g| = {f_err:.2e}, {:.3}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn within_scale(cfg: &CampaignConfig) -> bool {
    let dims = &cfg.sample.dims;
    match dims.len() {
        1 => dims[0] <= 16,
        2 => dims[0] <= 4 && dims[1] <= 4,
        _ => false,
    }
}

fn run_all(configs: &[CampaignConfig]) -> Result<Vec<CampaignReport>> {
    configs.iter().map(run_campaign).collect()
}

fn inequality_campaigns(configs: &[CampaignConfig], reports: &[CampaignReport], elapsed: Duration) -> Outcome {
    let mut failures = Vec::new();
    let mut cells = 0;
    for (cfg, r) in configs.iter().zip(reports) {
        if !within_scale(cfg) {
            failures.push(format!("{} exceeds desk scale {:?}", cfg.bound_id, cfg.sample.dims));
        }
        for row in &r.rows {
            cells += 1;
            if row.violations > 0 || row.samples < 1000 {
                failures.push(format!(
                    "{} ({}) ε={}: {} violations",
                    r.bound_id,
                    cfg.sample.kind.name(),
                    row.epsilon,
                    row.violations
                ));
            }
        }
        if r.rows.iter().map(|row| row.epsilon).collect::<Vec<_>>() != GRID {
            failures.push(format!("{} ran on a different grid", r.bound_id));
        }
    }
    let pass = failures.is_empty() && elapsed < Duration::from_secs(600);
    let mut detail = format!(
        "{} campaigns, {cells} cells of 1000 samples, {:.1}s",
        configs.len(),
        elapsed.as_secs_f64()
    );
    if !failures.is_empty() {
        detail += &format!("; {}", failures.join("; "));
    }
    outcome(pass, detail)
}

fn extremal_equality() -> Outcome {
    let osc = HamiltonianSpectrum::oscillator();
    let mut worst: f64 = 0.0;
    for k in [2usize, 3, 5] {
        for eps in [1e-3, 0.01, 0.1, 0.3, 0.7, 1.0] {
            for a in [1.0, 2.0, 4.0] {
                let (rho, sigma) = extremal_energy_pair(&osc, k, eps).expect("pair");
                let e = energy_scb(&rho, &sigma, &osc, a, eps).expect("evaluation");
                let refined = find(&e, "prop3.energy.refined").expect("refined");
                worst = worst.max(refined.slack.abs());
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max |bound − gap| = {worst:.2e} over k ∈ {{2,3,5}}"),
    )
}

/// Commuting partner of `rho` at trace distance exactly `eps`: mass `eps`
/// moves from the largest to the smallest eigenvalue.
fn shifted(rho: &DensityMatrix, eps: f64) -> DensityMatrix {
    let s = rho.hermitian().spectral();
    let mut w = s.values.clone();
    let last = w.len() - 1;
    w[0] -= eps;
    w[last] += eps;
    DensityMatrix::from_eigen(&w, &s.vectors).expect("valid shift")
}

fn value(evals: Result<Vec<BoundEvaluation>>, id: &str) -> f64 {
    let evals = evals.unwrap_or_else(|e| panic!("{id}: {e}"));
    find(&evals, id).unwrap_or_else(|| panic!("{id} missing")).bound_value
}

type Curve = Box<dyn Fn(f64) -> f64>;

fn faithfulness_curves(i: u64) -> Vec<(&'static str, Curve)> {
    let osc = HamiltonianSpectrum::oscillator();
    let mut rng = sample_rng(SEED, 1000 + i);
    let single = random_density_with(6, 6, &mut rng).expect("state");
    let bip = random_density_with(9, 9, &mut rng).expect("state");
    let (qc, _) = qc_pair(3, 3, 0.5, SEED + i).expect("qc pair");
    let omega = single
        .mix(&random_state(6, &mut rng).expect("state"), 0.5)
        .expect("mix");
    let dims = (3, 3);
    let mut out: Vec<(&'static str, Curve)> = Vec::new();
    {
        let r = single.clone();
        out.push((
            "thm3a.rank",
            Box::new(move |e| value(entropy_scb_rank(&r, &shifted(&r, e), 1, e), "thm3a.rank")),
        ));
    }
    for id in ["thm3b.energy", "remark6.energy"] {
        let (r, h) = (single.clone(), osc.clone());
        out.push((
            id,
            Box::new(move |e| value(entropy_scb_energy(&r, &shifted(&r, e), &h, 1, e), id)),
        ));
    }
    {
        let r = single.clone();
        out.push((
            "prop1.truncation",
            Box::new(move |e| value(entropy_truncation_scb(&r, &shifted(&r, e), e), "prop1.truncation")),
        ));
    }
    {
        let (r, h) = (single.clone(), osc.clone());
        out.push((
            "prop3.energy.refined",
            Box::new(move |e| value(energy_scb(&r, &shifted(&r, e), &h, 2.0, e), "prop3.energy.refined")),
        ));
    }
    {
        let r = single.clone();
        out.push((
            "cor1.entropy.d_star",
            Box::new(move |e| value(entropy_joint_support_cb(&r, &shifted(&r, e), e), "cor1.entropy.d_star")),
        ));
    }
    for id in ["prop5.re", "remark9.envelope"] {
        let (r, w) = (single.clone(), omega.clone());
        out.push((
            id,
            Box::new(move |e| {
                value(
                    re_dominated_scb(&r, &shifted(&r, e), &w, 0.5, e, DominatedMode::OneSided),
                    id,
                )
            }),
        ));
    }
    {
        let r = single.clone();
        out.push((
            "cor5.re",
            Box::new(move |e| {
                let s = shifted(&r, e);
                let w = r.mix(&s, 0.5).expect("mix");
                value(re_dominated_scb(&r, &s, &w, 0.5, e, DominatedMode::TwoSided), "cor5.re")
            }),
        ));
    }
    for id in ["prop6.qce.rank", "winter.qce"] {
        let r = bip.clone();
        out.push((
            id,
            Box::new(move |e| {
                value(
                    qce_commuting_cb(&r, &shifted(&r, e), dims, &MarginalConstraint::Rank, e),
                    id,
                )
            }),
        ));
    }
    {
        let (r, h) = (bip.clone(), osc.clone());
        out.push((
            "prop6.qce.energy",
            Box::new(move |e| {
                value(
                    qce_commuting_cb(&r, &shifted(&r, e), dims, &MarginalConstraint::Energy(h.clone()), e),
                    "prop6.qce.energy",
                )
            }),
        ));
    }
    {
        let r = bip.clone();
        out.push((
            "cor1.mi.rank",
            Box::new(move |e| value(mi_commuting_rank_cb(&r, &shifted(&r, e), dims, e), "cor1.mi.rank")),
        ));
    }
    for id in ["cor2.mi.refined", "cor2.mi.loose"] {
        let (r, h) = (bip.clone(), osc.clone());
        out.push((
            id,
            Box::new(move |e| value(mi_commuting_energy_cb(&r, &shifted(&r, e), dims, &h, e), id)),
        ));
    }
    for id in ["prop7.qce.rank", "prop7.qce.energy.refined", "prop7.qce.energy.loose"] {
        let (r, h): (QcState, _) = (qc.clone(), osc.clone());
        let constraint = if id == "prop7.qce.rank" {
            MarginalConstraint::Rank
        } else {
            MarginalConstraint::Energy(h)
        };
        out.push((id, Box::new(move |e| value(qce_qc_scb(&r, &r, &constraint, e), id))));
    }
    {
        let r = qc.clone();
        out.push((
            "prop8.qce.truncation",
            Box::new(move |e| value(qce_qc_truncation_and_llb(&r, &r, e), "prop8.qce.truncation")),
        ));
    }
    out
}

fn faithfulness() -> Outcome {
    let grid = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut worst_ratio: f64 = 0.0;
    for i in 0..20 {
        for (id, curve) in faithfulness_curves(i) {
            let values: Vec<f64> = grid.iter().map(|&e| curve(e)).collect();
            let monotone = values.windows(2).all(|w| w[1] < w[0]);
            let ratio = values[3] / values[0];
            worst_ratio = worst_ratio.max(ratio);
            checked += 1;
            if !monotone || ratio.is_nan() || ratio >= 1e-2 {
                failures.push(format!("{id} on ρ#{i}: {values:?}"));
            }
        }
    }
    let mut detail = format!("{checked} (bound, ρ) curves, worst bound(1e-4)/bound(0.1) = {worst_ratio:.2e}");
    if !failures.is_empty() {
        detail += &format!("; {}", failures.join("; "));
    }
    outcome(failures.is_empty(), detail)
}

fn eof_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = sample_rng(SEED, 77);
    let mut lo: f64 = f64::INFINITY;
    let mut hi: f64 = f64::NEG_INFINITY;
    let mut unconverged = 0;
    for i in 0..100 {
        let rho = random_state(4, &mut rng).expect("state");
        let exact = wootters_eof(&rho).expect("two qubits");
        let roof = convex_roof_eof(&rho, (2, 2), 4, 32, SEED + i).expect("roof");
        lo = lo.min(roof.value - exact);
        hi = hi.max(roof.value - exact);
        unconverged += usize::from(!roof.converged);
    }
    let roof_time = start.elapsed();
    let configs = eof_suite(1000, SEED);
    let reports = run_all(&configs);
    let elapsed = start.elapsed();
    let (violations, campaigns) = match &reports {
        Ok(rs) => (rs.iter().map(|r| r.total_violations()).sum::<usize>(), rs.len()),
        Err(e) => return outcome(false, format!("campaign error: {e}")),
    };
    let pass = lo >= -1e-9 && hi <= 5e-3 && violations == 0 && elapsed < Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "roof − Wootters ∈ [{lo:.2e}, {hi:.2e}] on 100 states ({unconverged} without stationarity flag, {:.1}s); \
             {campaigns} E_F campaigns, {violations} violations; total {:.1}s",
            roof_time.as_secs_f64(),
            elapsed.as_secs_f64()
        ),
    )
}

fn dominance(configs: &[CampaignConfig], reports: &[CampaignReport]) -> Outcome {
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for (cfg, r) in configs.iter().zip(reports) {
        if !cfg.bound_id.starts_with("dominance.") {
            continue;
        }
        seen.push(cfg.bound_id.as_str());
        let strict = cfg.bound_id == "dominance.winter";
        for row in &r.rows {
            let ok = row.violations == 0 && (!strict || row.min_slack > 0.0);
            if !ok {
                failures.push(format!(
                    "{} ε={} min slack {:.3e}",
                    cfg.bound_id, row.epsilon, row.min_slack
                ));
            }
        }
    }
    for id in [
        "dominance.prop7",
        "dominance.cor2",
        "dominance.winter",
        "dominance.thm3b",
    ] {
        if !seen.contains(&id) {
            failures.push(format!("{id} not run"));
        }
    }
    let mut detail = format!("{} ({} cells)", seen.join(", "), seen.len() * GRID.len());
    if !failures.is_empty() {
        detail += &format!("; {}", failures.join("; "));
    }
    outcome(failures.is_empty(), detail)
}

fn determinism(configs: &[CampaignConfig], reports: &[CampaignReport]) -> Outcome {
    let mut mismatches = Vec::new();
    let picks = [
        "thm3a.rank",
        "prop7.qce.energy.refined",
        "cor4.re.gibbs",
        "prop5.re",
        "eq10.qce",
    ];
    let mut checked = 0;
    for (cfg, r) in configs.iter().zip(reports) {
        if !picks.contains(&cfg.bound_id.as_str()) {
            continue;
        }
        let rerun = run_campaign_with(cfg, Execution::Sequential).expect("rerun");
        let threaded = run_campaign_with(cfg, Execution::Parallel(Some(4))).expect("rerun");
        checked += 1;
        if rerun.meta.digest != r.meta.digest || threaded.meta.digest != r.meta.digest {
            mismatches.push(cfg.bound_id.clone());
        }
    }
    let other = run_campaign(&configs[0].clone().with_seed(SEED + 1)).expect("run");
    let seed_sensitive = other.meta.digest != reports[0].meta.digest;
    let pass = mismatches.is_empty() && checked >= picks.len() && seed_sensitive;
    outcome(pass, format!("{checked} campaigns rerun sequentially and on 4 workers, mismatches: {mismatches:?}, seed-sensitive: {seed_sensitive}"))
}

fn report(n: usize, o: &Outcome) {
    let tag = if o.pass { "[PASS]" } else { "[FAIL]" };
    println!("{tag} criterion {n}: {}", o.detail);
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    results.push((1, gibbs_closed_forms()));

    let configs = standard_suite(1000, SEED);
    let start = Instant::now();
    let reports = run_all(&configs);
    let elapsed = start.elapsed();
    match &reports {
        Ok(rs) => results.push((2, inequality_campaigns(&configs, rs, elapsed))),
        Err(e) => results.push((2, outcome(false, format!("campaign error: {e}")))),
    }
    results.push((3, extremal_equality()));
    results.push((4, faithfulness()));
    results.push((5, eof_equivalence()));
    match &reports {
        Ok(rs) => {
            results.push((6, dominance(&configs, rs)));
            results.push((7, determinism(&configs, rs)));
        }
        Err(_) => {
            results.push((6, outcome(false, "campaigns did not run")));
            results.push((7, outcome(false, "campaigns did not run")));
        }
    }
    for (n, o) in &results {
        report(*n, o);
    }
    if results.iter().all(|(_, o)| o.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
