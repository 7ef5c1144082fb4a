use super::conditional::MarginalConstraint;
use super::entropy::check_distance;
use super::generic::{generic_energy_bound, generic_rank_bound, ClassParams};
use super::{check_positive_unit, digest_matrices, BoundEvaluation};
use crate::entropy::energy_moment;
use crate::eof::wootters_eof;
use crate::error::{invalid, Result};
use crate::gibbs::f_of_e_clamped;
use crate::operator::{fidelity, partial_trace, DensityMatrix, Subsystem};
use crate::scalar::EnvelopeKind;

/// `δ = √(ε(2 − ε))`.
pub fn trace_delta(eps: f64) -> f64 {
    (eps * (2.0 - eps)).max(0.0).sqrt()
}

/// `δ = √(1 − F(ρ, σ))`.
pub fn fidelity_delta(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((1.0 - fidelity(rho, sigma)?).max(0.0).sqrt())
}

fn rank_or_energy(
    rho: &DensityMatrix,
    dims: (usize, usize),
    constraint: &MarginalConstraint,
    delta: f64,
) -> Result<Vec<(&'static str, f64)>> {
    let p = ClassParams::new(1.0, 1.0, 1, 2)?;
    let rho_a = partial_trace(rho, dims, Subsystem::A)?;
    match constraint {
        MarginalConstraint::Rank => {
            let d = rho_a.rank().max(1) as f64;
            Ok(vec![
                ("rank", generic_rank_bound(&p, d, delta, EnvelopeKind::Envelope)?),
                ("rank.h_up", generic_rank_bound(&p, d, delta, EnvelopeKind::HUp)?),
            ])
        }
        MarginalConstraint::Energy(spec) => {
            let energy = energy_moment(&rho_a, spec, 1.0, None)?;
            let f = |e: f64| f_of_e_clamped(spec, e);
            Ok(vec![(
                "energy",
                generic_energy_bound(&p, &f, energy, delta, EnvelopeKind::HUp)?,
            )])
        }
    }
}

/// Semicontinuity bounds for `E_F(ρ) − E_F(σ)` with a user-supplied
/// entanglement of formation.
///
/// With `δ = √(ε(2 − ε))` the identifiers are `prop10.eof.rank`,
/// `prop10.eof.rank.h_up` (rank constraint) and `prop10.eof.energy`; with
/// `δ = √(1 − F)` they are `prop10.eof.fidelity` (rank) and
/// `prop10.eof.fidelity.energy`.
pub fn eof_scb_with(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    dims: (usize, usize),
    constraint: &MarginalConstraint,
    eps: f64,
    eof: &dyn Fn(&DensityMatrix) -> Result<f64>,
) -> Result<Vec<BoundEvaluation>> {
    check_positive_unit("epsilon", eps)?;
    check_distance(rho, sigma, eps)?;
    let gap = eof(rho)? - eof(sigma)?;
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    let mut out = Vec::new();
    for (name, value) in rank_or_energy(rho, dims, constraint, trace_delta(eps))? {
        out.push(BoundEvaluation::upper(
            format!("prop10.eof.{name}"),
            eps,
            value,
            gap,
            &digest,
        ));
    }
    for (name, value) in rank_or_energy(rho, dims, constraint, fidelity_delta(rho, sigma)?)? {
        let id = match name {
            "rank" => "prop10.eof.fidelity".to_string(),
            "energy" => "prop10.eof.fidelity.energy".to_string(),
            _ => continue,
        };
        out.push(BoundEvaluation::upper(id, eps, value, gap, &digest));
    }
    Ok(out)
}

/// [`eof_scb_with`] for two qubits, with `E_F` from the concurrence formula.
pub fn eof_scb(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    dims: (usize, usize),
    constraint: &MarginalConstraint,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    if dims != (2, 2) {
        return Err(invalid(
            "dims",
            format!("closed-form E_F needs 2 ⊗ 2, got {} ⊗ {}", dims.0, dims.1),
        ));
    }
    eof_scb_with(rho, sigma, dims, constraint, eps, &wootters_eof)
}
