use super::entropy::check_distance;
use super::{check_unit, digest_matrices, BoundEvaluation};
use crate::entropy::energy_moment;
use crate::error::{invalid, Error, Result};
use crate::operator::{pinch, DensityMatrix, PositiveOperator};
use crate::spectrum::HamiltonianSpectrum;

fn check_order(a: f64) -> Result<()> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(invalid(
            "a",
            format!("moment order must be a finite number ≥ 1, got {a}"),
        ));
    }
    Ok(())
}

/// `(ε^{1−1/a} (Tr H^a(ρ̂ ∧ εI))^{1/a}, ε^{1−1/a} (Tr H^a ρ)^{1/a})` with `ρ̂`
/// the pinching of `ρ` to the eigenbasis of `H`.
pub fn energy_scb_values(rho: &DensityMatrix, spec: &HamiltonianSpectrum, a: f64, eps: f64) -> Result<(f64, f64)> {
    check_order(a)?;
    check_unit("epsilon", eps)?;
    let levels = spec.levels(rho.dim())?;
    let diag = pinch(rho, None);
    let mut capped = 0.0;
    let mut full = 0.0;
    for (&hk, &p) in levels.iter().zip(&diag) {
        if hk > 0.0 {
            let w = hk.powf(a);
            capped += w * p.min(eps);
            full += w * p;
        }
    }
    let prefactor = eps.powf(1.0 - 1.0 / a);
    Ok((prefactor * capped.powf(1.0 / a), prefactor * full.powf(1.0 / a)))
}

/// `E_H(ρ) − E_H(σ)` against the refined (`prop3.energy.refined`) and the
/// simple (`prop3.energy.simple`) semicontinuity bounds.
pub fn energy_scb(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    spec: &HamiltonianSpectrum,
    a: f64,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_distance(rho, sigma, eps)?;
    let (refined, simple) = energy_scb_values(rho, spec, a, eps)?;
    let gap = energy_moment(rho, spec, 1.0, None)? - energy_moment(sigma, spec, 1.0, None)?;
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![
        BoundEvaluation::upper("prop3.energy.refined", eps, refined, gap, &digest),
        BoundEvaluation::upper("prop3.energy.simple", eps, simple, gap, &digest),
    ])
}

/// `cor3.energy`: `|E_H(ρ) − E_H(σ)| ≤ ε^{1−1/a} E^{1/a}` when
/// `Tr H^a ρ, Tr H^a σ ≤ E`. For `a = 1` the bound reduces to `E`.
pub fn energy_moment_difference(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    spec: &HamiltonianSpectrum,
    a: f64,
    energy: f64,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_order(a)?;
    check_unit("epsilon", eps)?;
    check_distance(rho, sigma, eps)?;
    for (name, state) in [("ρ", rho), ("σ", sigma)] {
        let moment = energy_moment(state, spec, a, None)?;
        if moment > energy * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::Precondition(format!(
                "Tr H^a {name} = {moment} exceeds E = {energy}"
            )));
        }
    }
    let bound = eps.powf(1.0 - 1.0 / a) * energy.powf(1.0 / a);
    let gap = (energy_moment(rho, spec, 1.0, None)? - energy_moment(sigma, spec, 1.0, None)?).abs();
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![BoundEvaluation::upper("cor3.energy", eps, bound, gap, &digest)])
}
