use super::entropy::{check_distance, DISTANCE_TOL};
use super::generic::{generic_energy_bound, generic_rank_bound, ClassParams};
use super::{check_positive_unit, check_unit, digest_matrices, BoundEvaluation};
use crate::entropy::{conditional_entropy, energy_moment, energy_of_positive, extended_entropy, mutual_information};
use crate::error::{Error, Result};
use crate::gibbs::f_of_e_clamped;
use crate::operator::{
    cap_at, clip_below, commute, partial_trace, partial_trace_positive, DensityMatrix, PositiveOperator, Subsystem,
    SUPPORT_TOL,
};
use crate::scalar::{g, h, h_up, EnvelopeKind};
use crate::spectrum::HamiltonianSpectrum;
use crate::stategen::QcState;

/// Constraint on the `A` side of a bipartite pair.
#[derive(Clone, Debug, PartialEq)]
pub enum MarginalConstraint {
    /// Rank of the `A` marginals.
    Rank,
    /// Energy of the `A` marginals for a Hamiltonian diagonal in the
    /// computational basis of `A`.
    Energy(HamiltonianSpectrum),
}

fn marginal_a(rho: &DensityMatrix, dims: (usize, usize)) -> Result<DensityMatrix> {
    partial_trace(rho, dims, Subsystem::A)
}

fn marginal_energy(rho: &DensityMatrix, dims: (usize, usize), spec: &HamiltonianSpectrum) -> Result<f64> {
    energy_moment(&marginal_a(rho, dims)?, spec, 1.0, None)
}

fn require_commuting(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if !commute(rho, sigma) {
        return Err(Error::Precondition("[ρ, σ] = 0".into()));
    }
    Ok(())
}

fn winter(d: f64, eps: f64) -> f64 {
    2.0 * eps * d.ln() + g(eps)
}

/// Continuity bound for `S(A|B)` on commuting pairs.
///
/// Rank form: `prop6.qce.rank` (`{2ε ln d + h(ε)}↑`), `prop6.qce.rank.h_up`,
/// the reference `winter.qce` (`2ε ln d_W + g(ε)` with `d_W` the rank of
/// `ρ_A + σ_A`) and `dominance.winter`, which checks the new bound against
/// the reference at the same `d`. Energy form: `prop6.qce.energy`.
pub fn qce_commuting_cb(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    dims: (usize, usize),
    constraint: &MarginalConstraint,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_unit("epsilon", eps)?;
    check_distance(rho, sigma, eps)?;
    require_commuting(rho, sigma)?;
    let gap = (conditional_entropy(rho, dims)? - conditional_entropy(sigma, dims)?).abs();
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    let p = ClassParams::new(2.0, 1.0, 1, 2)?;
    match constraint {
        MarginalConstraint::Rank => {
            let ra = marginal_a(rho, dims)?;
            let sa = marginal_a(sigma, dims)?;
            let d = ra.rank().max(sa.rank()).max(1) as f64;
            let joint = ra.mix(&sa, 0.5)?.hermitian().spectral().rank(SUPPORT_TOL).max(1) as f64;
            let env = generic_rank_bound(&p, d, eps, EnvelopeKind::Envelope)?;
            let up = generic_rank_bound(&p, d, eps, EnvelopeKind::HUp)?;
            Ok(vec![
                BoundEvaluation::upper("prop6.qce.rank", eps, env, gap, &digest),
                BoundEvaluation::upper("prop6.qce.rank.h_up", eps, up, gap, &digest),
                BoundEvaluation::upper("winter.qce", eps, winter(joint, eps), gap, &digest),
                BoundEvaluation::upper("dominance.winter", eps, winter(d, eps), env, &digest),
            ])
        }
        MarginalConstraint::Energy(spec) => {
            let energy = marginal_energy(rho, dims, spec)?.max(marginal_energy(sigma, dims, spec)?);
            let f = |e: f64| f_of_e_clamped(spec, e);
            let bound = generic_energy_bound(&p, &f, energy, eps, EnvelopeKind::HUp)?;
            Ok(vec![BoundEvaluation::upper(
                "prop6.qce.energy",
                eps,
                bound,
                gap,
                &digest,
            )])
        }
    }
}

fn exact_kind(td: f64, eps: f64) -> EnvelopeKind {
    if (td - eps).abs() <= DISTANCE_TOL {
        EnvelopeKind::Exact
    } else {
        EnvelopeKind::HUp
    }
}

/// `cor1.mi.rank`: `|I(A:B)_ρ − I(A:B)_σ| ≤ 2ε ln d + 2h(ε)` for commuting
/// pairs, with `d` the larger rank of the `A` marginals. At distances below
/// `ε` the `h↑` form is used.
pub fn mi_commuting_rank_cb(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    dims: (usize, usize),
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_positive_unit("epsilon", eps)?;
    let td = check_distance(rho, sigma, eps)?;
    require_commuting(rho, sigma)?;
    let d = marginal_a(rho, dims)?
        .rank()
        .max(marginal_a(sigma, dims)?.rank())
        .max(1) as f64;
    let p = ClassParams::new(2.0, 2.0, 1, 2)?;
    let bound = generic_rank_bound(&p, d, eps, exact_kind(td, eps))?;
    let gap = (mutual_information(rho, dims)? - mutual_information(sigma, dims)?).abs();
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![BoundEvaluation::upper("cor1.mi.rank", eps, bound, gap, &digest)])
}

/// One-sided energy bounds for `I(A:B)_ρ − I(A:B)_σ` on commuting pairs at
/// distance exactly `ε`: `cor2.mi.refined` with `E(ρ) − E_ε(ρ)`,
/// `cor2.mi.loose` with `E(ρ)`, and `dominance.cor2` comparing the refined
/// value to the loose one. Here `E_ε(ρ) = Tr H([ρ − εI]₊)_A`.
pub fn mi_commuting_energy_cb(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    dims: (usize, usize),
    spec: &HamiltonianSpectrum,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_positive_unit("epsilon", eps)?;
    let td = check_distance(rho, sigma, eps)?;
    if (td - eps).abs() > DISTANCE_TOL {
        return Err(Error::Precondition(format!("trace distance {td} must equal ε = {eps}")));
    }
    require_commuting(rho, sigma)?;
    let levels = spec.levels(dims.0)?;
    let energy = marginal_energy(rho, dims, spec)?;
    let clipped = partial_trace_positive(&clip_below(rho, eps)?, dims, Subsystem::A)?;
    let e_eps = energy_of_positive(&clipped, &levels)?;

    let p = ClassParams::new(2.0, 2.0, 1, 2)?;
    let f = |e: f64| f_of_e_clamped(spec, e);
    let bound = |e: f64| generic_energy_bound(&p, &f, e.max(0.0), eps, EnvelopeKind::Exact);
    let refined = bound(energy - e_eps)?;
    let loose = bound(energy)?;
    let gap = mutual_information(rho, dims)? - mutual_information(sigma, dims)?;
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![
        BoundEvaluation::upper("cor2.mi.refined", eps, refined, gap, &digest),
        BoundEvaluation::upper("cor2.mi.loose", eps, loose, gap, &digest),
        BoundEvaluation::upper("dominance.cor2", eps, loose, refined, &digest),
    ])
}

/// Almost-convexity of `S(A|B)` under mixing with weight `p`:
/// `eq10.qce` (upper, `+h(p)`) and `eq10.qce.lower` (concavity).
pub fn qce_mixing(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    dims: (usize, usize),
    p: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_unit("p", p)?;
    let mix = rho.mix(sigma, p)?;
    let avg = p * conditional_entropy(rho, dims)? + (1.0 - p) * conditional_entropy(sigma, dims)?;
    let value = conditional_entropy(&mix, dims)?;
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![
        BoundEvaluation::upper("eq10.qce", p, avg + h(p), value, &digest),
        BoundEvaluation::lower("eq10.qce.lower", p, avg, value, &digest),
    ])
}

/// `I(A:B)` of a mixture stays within `±h(p)` of the average:
/// `eq14.mi` (lower) and `eq15.mi` (upper).
pub fn mi_mixing(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    dims: (usize, usize),
    p: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_unit("p", p)?;
    let mix = rho.mix(sigma, p)?;
    let avg = p * mutual_information(rho, dims)? + (1.0 - p) * mutual_information(sigma, dims)?;
    let value = mutual_information(&mix, dims)?;
    let hp = h(p);
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![
        BoundEvaluation::lower("eq14.mi", p, avg - hp, value, &digest),
        BoundEvaluation::upper("eq15.mi", p, avg + hp, value, &digest),
    ])
}

fn check_qc_distance(rho: &QcState, sigma: &QcState, eps: f64) -> Result<f64> {
    let td = rho.distance(sigma)?;
    if td > eps + DISTANCE_TOL {
        return Err(Error::Precondition(format!("trace distance {td} exceeds ε = {eps}")));
    }
    Ok(td)
}

fn qc_digest(rho: &QcState, sigma: &QcState) -> Result<String> {
    Ok(digest_matrices(&[
        rho.to_density()?.matrix(),
        sigma.to_density()?.matrix(),
    ]))
}

/// Semicontinuity bound for `S(A|B)_ρ − S(A|B)_σ` on q-c pairs, constrained
/// on `ρ` only.
///
/// Rank form: `prop7.qce.rank` and `prop7.qce.rank.h_up`. Energy form:
/// `prop7.qce.energy.refined` (with `E − E_{H,ε}(ρ)`, where
/// `E_{H,ε}(ρ) = Σ_k Tr H[p_kρ_k − εI]₊`), `prop7.qce.energy.loose` and
/// `dominance.prop7`.
pub fn qce_qc_scb(
    rho: &QcState,
    sigma: &QcState,
    constraint: &MarginalConstraint,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_unit("epsilon", eps)?;
    check_qc_distance(rho, sigma, eps)?;
    let gap = rho.conditional_entropy() - sigma.conditional_entropy();
    let digest = qc_digest(rho, sigma)?;
    let p = ClassParams::new(1.0, 1.0, 1, 2)?;
    let rho_a = rho.marginal_a()?;
    match constraint {
        MarginalConstraint::Rank => {
            let d = rho_a.rank().max(1) as f64;
            let env = generic_rank_bound(&p, d, eps, EnvelopeKind::Envelope)?;
            let up = generic_rank_bound(&p, d, eps, EnvelopeKind::HUp)?;
            Ok(vec![
                BoundEvaluation::upper("prop7.qce.rank", eps, env, gap, &digest),
                BoundEvaluation::upper("prop7.qce.rank.h_up", eps, up, gap, &digest),
            ])
        }
        MarginalConstraint::Energy(spec) => {
            let levels = spec.levels(rho.dim_a)?;
            let energy = energy_moment(&rho_a, spec, 1.0, None)?;
            let mut e_eps = 0.0;
            for k in 0..rho.blocks() {
                e_eps += energy_of_positive(&clip_below(&rho.block(k)?, eps)?, &levels)?;
            }
            let f = |e: f64| f_of_e_clamped(spec, e);
            let refined = generic_energy_bound(&p, &f, (energy - e_eps).max(0.0), eps, EnvelopeKind::HUp)?;
            let loose = generic_energy_bound(&p, &f, energy, eps, EnvelopeKind::HUp)?;
            Ok(vec![
                BoundEvaluation::upper("prop7.qce.energy.refined", eps, refined, gap, &digest),
                BoundEvaluation::upper("prop7.qce.energy.loose", eps, loose, gap, &digest),
                BoundEvaluation::upper("dominance.prop7", eps, loose, refined, &digest),
            ])
        }
    }
}

/// Truncation bound and local lower bound on q-c pairs.
///
/// `prop8.qce.truncation` and `cor6.ensemble` bound `S(A|B)_ρ − S(A|B)_σ`
/// by `Σ_k S̃((p_kρ_k) ∧ εI) + h↑(ε)`, measured on the full matrices and on
/// the ensembles respectively. `prop9.qce.llb` and `cor7.ensemble.llb` check
/// `S(A|B)_σ ≥ Σ_k S̃([p_kρ_k − εI]₊) − h↑(ε)` in the same two ways.
pub fn qce_qc_truncation_and_llb(rho: &QcState, sigma: &QcState, eps: f64) -> Result<Vec<BoundEvaluation>> {
    check_positive_unit("epsilon", eps)?;
    check_qc_distance(rho, sigma, eps)?;
    if rho.blocks() != sigma.blocks() {
        return Err(Error::DimensionMismatch(rho.blocks(), sigma.blocks()));
    }
    let mut capped = 0.0;
    let mut clipped = 0.0;
    for k in 0..rho.blocks() {
        let block = rho.block(k)?;
        capped += extended_entropy(&cap_at(&block, eps)?);
        clipped += extended_entropy(&clip_below(&block, eps)?);
    }
    let hu = h_up(eps);
    let dims = (rho.dim_a, rho.blocks());
    let full_rho = rho.to_density()?;
    let full_sigma = sigma.to_density()?;
    let full_r = conditional_entropy(&full_rho, dims)?;
    let full_s = conditional_entropy(&full_sigma, dims)?;
    let ens_r = rho.conditional_entropy();
    let ens_s = sigma.conditional_entropy();
    let digest = digest_matrices(&[full_rho.matrix(), full_sigma.matrix()]);
    Ok(vec![
        BoundEvaluation::upper("prop8.qce.truncation", eps, capped + hu, full_r - full_s, &digest),
        BoundEvaluation::upper("cor6.ensemble", eps, capped + hu, ens_r - ens_s, &digest),
        BoundEvaluation::lower("prop9.qce.llb", eps, clipped - hu, full_s, &digest),
        BoundEvaluation::lower("cor7.ensemble.llb", eps, clipped - hu, ens_s, &digest),
    ])
}
