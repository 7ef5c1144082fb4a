use serde::{Deserialize, Serialize};

use super::entropy::{check_distance, DISTANCE_TOL};
use super::{check_positive_unit, check_unit, digest_matrices, BoundEvaluation};
use crate::entropy::{energy_moment, entropy, relative_entropy};
use crate::error::{invalid, Error, Result};
use crate::gibbs::{f_of_e_clamped, solve_beta, z_of_e};
use crate::operator::{commute, CMatrix, DensityMatrix, PositiveOperator};
use crate::scalar::{envelope, eta, eta_up, g, h, h_up};
use crate::spectrum::HamiltonianSpectrum;

const DOMINATION_TOL: f64 = 1e-10;

/// The Gibbs state `e^{−βH}/Tr e^{−βH}` of a spectrum, diagonal in the
/// computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsReference {
    pub spec: HamiltonianSpectrum,
    pub beta: f64,
    pub ln_z: f64,
}

impl GibbsReference {
    pub fn new(spec: HamiltonianSpectrum, beta: f64) -> Result<Self> {
        let part = spec.partition(beta)?;
        let ln_z = part.ln_z_shifted - beta * spec.ground();
        Ok(Self { spec, beta, ln_z })
    }

    /// The reference whose mean energy is `E`.
    pub fn at_energy(spec: HamiltonianSpectrum, energy: f64) -> Result<Self> {
        let beta = solve_beta(&spec, energy)?.beta;
        Self::new(spec, beta)
    }

    /// `D(ρ‖ω) = βTr Hρ + ln Z − S(ρ)`.
    pub fn relative_entropy(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(self.beta * energy_moment(rho, &self.spec, 1.0, None)? + self.ln_z - entropy(rho))
    }
}

/// `|D(ρ‖ω) − D(σ‖ω)|` for a Gibbs reference.
pub fn gibbs_relative_entropy_gap(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    reference: &GibbsReference,
) -> Result<f64> {
    let de = energy_moment(rho, &reference.spec, 1.0, None)? - energy_moment(sigma, &reference.spec, 1.0, None)?;
    Ok((reference.beta * de - entropy(rho) + entropy(sigma)).abs())
}

fn check_order(a: f64) -> Result<()> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(invalid("a", format!("need a finite a > 1, got {a}")));
    }
    Ok(())
}

fn check_moments(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    spec: &HamiltonianSpectrum,
    a: f64,
    energy: f64,
    basis: Option<&CMatrix>,
) -> Result<()> {
    for (name, state) in [("ρ", rho), ("σ", sigma)] {
        let moment = energy_moment(state, spec, a, basis)?;
        if moment > energy * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::Precondition(format!(
                "Tr H^a {name} = {moment} exceeds E = {energy}"
            )));
        }
    }
    Ok(())
}

/// `εF_H((E/ε)^{1/a}) + h↑(ε)`.
fn entropy_term(spec: &HamiltonianSpectrum, a: f64, energy: f64, eps: f64) -> Result<f64> {
    if eps == 0.0 {
        return Ok(0.0);
    }
    Ok(eps * f_of_e_clamped(spec, (energy / eps).powf(1.0 / a))? + h_up(eps))
}

/// `max_{x ∈ [0, min(ε, E/h₂^a)]} {xF_{H₁}((E/x)^{1/a}) + h(x)}` with `H₁` the
/// spectrum without its lowest level.
pub fn re_gibbs_max_term(spec: &HamiltonianSpectrum, a: f64, energy: f64, eps: f64) -> Result<f64> {
    check_unit("epsilon", eps)?;
    let h1 = spec.drop_lowest(1)?;
    let h2 = h1.ground();
    let cap = if h2 > 0.0 { energy / h2.powf(a) } else { f64::INFINITY };
    let top = eps.min(cap);
    if top <= 0.0 {
        return Ok(0.0);
    }
    f_of_e_clamped(&h1, (energy / top).powf(1.0 / a))?;
    let term = |x: f64| -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match f_of_e_clamped(&h1, (energy / x).powf(1.0 / a)) {
            Ok(f) => x * f + h(x),
            Err(_) => f64::NAN,
        }
    };
    let value = envelope(term, top);
    if value.is_nan() {
        return Err(invalid("energy", "F_{H_1} failed inside the maximization"));
    }
    Ok(value)
}

/// `1 − 1/Z_{H^a}(E)`: the largest `ε` for which the refined term applies.
pub fn re_gibbs_refined_threshold(spec: &HamiltonianSpectrum, a: f64, energy: f64) -> Result<f64> {
    Ok(1.0 - 1.0 / z_of_e(&spec.power(a)?, energy)?)
}

/// Oscillator closed form of the Gibbs-reference bound at `β = ln(1 + 1/E)`:
/// `ε^{1−1/a}E^{1/a} ln(1 + 1/E) + εg((E/ε)^{1/a}) + h↑(ε)`.
pub fn oscillator_re_closed_form(a: f64, energy: f64, eps: f64) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    let lead = eps.powf(1.0 - 1.0 / a) * energy.powf(1.0 / a) * (1.0 / energy).ln_1p();
    lead + eps * g((energy / eps).powf(1.0 / a)) + h_up(eps)
}

/// Refined oscillator closed form
/// `ε^{1−1/a}E^{1/a}(ln(1 + 1/E) + h((ε/E)^{1/a})) + h(ε)`, valid for
/// `ε ≤ min(E, 1 − 1/Z_{N^a}(E))`.
pub fn oscillator_re_refined_closed_form(a: f64, energy: f64, eps: f64) -> f64 {
    let lead = eps.powf(1.0 - 1.0 / a) * energy.powf(1.0 / a);
    lead * ((1.0 / energy).ln_1p() + h((eps / energy).powf(1.0 / a))) + h(eps)
}

/// Continuity bound for `D(·‖ω)` with a Gibbs reference under the moment
/// constraint `Tr H^a ρ, Tr H^a σ ≤ E`. Returns `cor4.re.gibbs`,
/// `remark8.max` and, when `ε ≤ 1 − 1/Z_{H^a}(E)`, `remark8.refined`.
pub fn re_gibbs_cb(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    reference: &GibbsReference,
    a: f64,
    energy: f64,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_order(a)?;
    check_unit("epsilon", eps)?;
    check_distance(rho, sigma, eps)?;
    let spec = &reference.spec;
    if !spec.is_grounded() {
        return Err(invalid("spec", "the Hamiltonian must have zero ground energy"));
    }
    check_moments(rho, sigma, spec, a, energy, None)?;
    let gap = gibbs_relative_entropy_gap(rho, sigma, reference)?;
    let lead = reference.beta * eps.powf(1.0 - 1.0 / a) * energy.powf(1.0 / a);
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    let mut out = vec![
        BoundEvaluation::upper(
            "cor4.re.gibbs",
            eps,
            lead + entropy_term(spec, a, energy, eps)?,
            gap,
            &digest,
        ),
        BoundEvaluation::upper(
            "remark8.max",
            eps,
            lead + re_gibbs_max_term(spec, a, energy, eps)?,
            gap,
            &digest,
        ),
    ];
    if eps > 0.0 && energy > 0.0 && eps <= re_gibbs_refined_threshold(spec, a, energy)? {
        let h1 = spec.drop_lowest(1)?;
        let refined = lead + eps * f_of_e_clamped(&h1, (energy / eps).powf(1.0 / a))? + h(eps);
        out.push(BoundEvaluation::upper("remark8.refined", eps, refined, gap, &digest));
    }
    Ok(out)
}

/// `H = c(−ln ω + ln λ₁)` in the eigenbasis of a faithful `ω`, with levels in
/// nondecreasing order matching the columns of the returned basis.
pub fn faithful_hamiltonian(omega: &DensityMatrix, c: f64) -> Result<(HamiltonianSpectrum, CMatrix)> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid("c", format!("{c} must be positive")));
    }
    let s = omega.hermitian().spectral();
    let top = s.values[0];
    if s.values.iter().any(|&x| x <= 0.0) {
        return Err(Error::Precondition("ω is faithful".into()));
    }
    let levels: Vec<f64> = s.values.iter().map(|&x| c * (top.ln() - x.ln()).max(0.0)).collect();
    Ok((HamiltonianSpectrum::explicit(levels)?, s.vectors.clone()))
}

/// `prop4.re`: `|D(ρ‖ω) − D(σ‖ω)| ≤ (1/c)ε^{1−1/a}E^{1/a} + εF_H((E/ε)^{1/a}) + h↑(ε)`
/// for a faithful `ω` and `Tr H^a ρ, Tr H^a σ ≤ E`.
pub fn re_faithful_cb(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    omega: &DensityMatrix,
    c: f64,
    a: f64,
    energy: f64,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_order(a)?;
    check_unit("epsilon", eps)?;
    check_distance(rho, sigma, eps)?;
    let (spec, basis) = faithful_hamiltonian(omega, c)?;
    check_moments(rho, sigma, &spec, a, energy, Some(&basis))?;
    let lead = eps.powf(1.0 - 1.0 / a) * energy.powf(1.0 / a) / c;
    let bound = lead + entropy_term(&spec, a, energy, eps)?;
    let gap = (relative_entropy(rho, omega)? - relative_entropy(sigma, omega)?).abs();
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix(), omega.matrix()]);
    Ok(vec![BoundEvaluation::upper("prop4.re", eps, bound, gap, &digest)])
}

/// Which domination hypothesis the semicontinuity bound uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominatedMode {
    /// `cρ ≤ ω` with `[ρ, σ] = 0` or `[ρ, ω] = 0`; bounds `D(ρ‖ω) − D(σ‖ω)`.
    OneSided,
    /// `cρ, cσ ≤ ω` with `[ρ, σ] = 0`; bounds `|D(ρ‖ω) − D(σ‖ω)|`.
    TwoSided,
}

fn check_dominated(state: &DensityMatrix, omega: &DensityMatrix, c: f64, name: &str) -> Result<()> {
    let diff = omega.hermitian().sub(&state.hermitian().scale(c))?;
    let min = diff.min_eigenvalue();
    if min < -DOMINATION_TOL {
        return Err(Error::Precondition(format!(
            "c{name} ≤ ω (minimum eigenvalue {min:.3e})"
        )));
    }
    Ok(())
}

/// `(1/c)η↑(cε) + h↑(ε)`, `(1/c)η(cε) + h(ε)` and the envelope
/// `sup_{δ ≤ ε} [(1/c)η(cδ) + h(δ)]`.
pub fn dominated_values(c: f64, eps: f64) -> (f64, f64, f64) {
    let exact = |t: f64| eta(c * t) / c + h(t);
    (eta_up(c * eps) / c + h_up(eps), exact(eps), envelope(exact, eps))
}

/// Semicontinuity bound for `D(·‖ω)` over states dominated by `ω/c`.
/// Returns `prop5.re` (or `cor5.re`), its envelope refinement
/// `remark9.envelope` (or `remark9.envelope.two_sided`) and, when the pair
/// commutes at distance exactly `ε`, the `.exact` variant.
pub fn re_dominated_scb(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    omega: &DensityMatrix,
    c: f64,
    eps: f64,
    mode: DominatedMode,
) -> Result<Vec<BoundEvaluation>> {
    check_positive_unit("epsilon", eps)?;
    if !(c > 0.0 && c < 1.0) {
        return Err(invalid("c", format!("{c} not in (0, 1)")));
    }
    let td = check_distance(rho, sigma, eps)?;
    check_dominated(rho, omega, c, "ρ")?;
    let pair_commutes = commute(rho, sigma);
    let (prefix, envelope_id) = match mode {
        DominatedMode::OneSided => {
            if !pair_commutes && !commute(rho, omega) {
                return Err(Error::Precondition("[ρ, σ] = 0 or [ρ, ω] = 0".into()));
            }
            ("prop5.re", "remark9.envelope")
        }
        DominatedMode::TwoSided => {
            check_dominated(sigma, omega, c, "σ")?;
            if !pair_commutes {
                return Err(Error::Precondition("[ρ, σ] = 0".into()));
            }
            ("cor5.re", "remark9.envelope.two_sided")
        }
    };
    let diff = relative_entropy(rho, omega)? - relative_entropy(sigma, omega)?;
    let gap = match mode {
        DominatedMode::OneSided => diff,
        DominatedMode::TwoSided => diff.abs(),
    };
    let (up, exact, env) = dominated_values(c, eps);
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix(), omega.matrix()]);
    let mut out = vec![
        BoundEvaluation::upper(prefix, eps, up, gap, &digest),
        BoundEvaluation::upper(envelope_id, eps, env, gap, &digest),
    ];
    if pair_commutes && (td - eps).abs() <= DISTANCE_TOL {
        out.push(BoundEvaluation::upper(
            format!("{prefix}.exact"),
            eps,
            exact,
            gap,
            &digest,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::find;
    use crate::gibbs::f_of_e;
    use crate::stategen::{commuting_pair, energy_constrained, random_density};

    #[test]
    fn gibbs_reference_matches_direct_relative_entropy() {
        let osc = HamiltonianSpectrum::oscillator();
        let reference = GibbsReference::at_energy(osc.clone(), 0.5).unwrap();
        assert!((reference.beta - 3f64.ln()).abs() < 1e-10);
        assert!((reference.ln_z - 1.5f64.ln()).abs() < 1e-10);
        let gamma = crate::gibbs::gibbs_state(&osc, 0.5, 60).unwrap();
        let rho = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let mut padded = vec![0.0; 60];
        padded[..3].copy_from_slice(&[0.5, 0.3, 0.2]);
        let rho_big = DensityMatrix::diagonal(&padded).unwrap();
        let direct = relative_entropy(&rho_big, &gamma).unwrap();
        assert!((reference.relative_entropy(&rho).unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn oscillator_forms_match_closed_forms() {
        let osc = HamiltonianSpectrum::oscillator();
        let n1 = osc.drop_lowest(1).unwrap();
        for x in [1.5, 3.0, 10.0] {
            assert!((f_of_e(&n1, x).unwrap() - x * h(1.0 / x)).abs() < 1e-9);
        }
        let (rho, _) = energy_constrained(&osc, 0.8, 4, 3).unwrap();
        let energy = 9.0;
        let reference = GibbsReference::at_energy(osc.clone(), energy).unwrap();
        for a in [2.0, 3.0] {
            let thr = re_gibbs_refined_threshold(&osc, a, energy).unwrap();
            assert!(thr > 0.0 && thr < 1.0);
            for eps in [0.01, 0.1, 0.3] {
                let e = re_gibbs_cb(&rho, &rho, &reference, a, energy, eps).unwrap();
                let b = find(&e, "cor4.re.gibbs").unwrap().bound_value;
                assert!(
                    (b - oscillator_re_closed_form(a, energy, eps)).abs() < 1e-8,
                    "a={a} eps={eps}"
                );
                match find(&e, "remark8.refined") {
                    Some(r) => {
                        assert!(eps <= thr);
                        assert!((r.bound_value - oscillator_re_refined_closed_form(a, energy, eps)).abs() < 1e-8);
                    }
                    None => assert!(eps > thr),
                }
            }
        }
    }

    #[test]
    fn max_term_equals_refined_for_small_eps() {
        let osc = HamiltonianSpectrum::oscillator();
        let energy = 4.0;
        let a = 2.0;
        let eps = 0.01;
        let lead_free = re_gibbs_max_term(&osc, a, energy, eps).unwrap();
        let refined =
            oscillator_re_refined_closed_form(a, energy, eps) - eps.powf(0.5) * energy.sqrt() * (1.0 / energy).ln_1p();
        assert!((lead_free - refined).abs() < 1e-9);
    }

    #[test]
    fn faithful_reference_hamiltonian() {
        let omega = DensityMatrix::diagonal(&[0.5, 0.25, 0.25]).unwrap();
        let (spec, _) = faithful_hamiltonian(&omega, 1.0).unwrap();
        let l = spec.levels(3).unwrap();
        assert!(l[0].abs() < 1e-15 && (l[1] - 2f64.ln()).abs() < 1e-12 && (l[2] - 2f64.ln()).abs() < 1e-12);
        let rho = random_density(3, 3, 4).unwrap();
        let sigma = rho.mix(&DensityMatrix::maximally_mixed(3), 0.9).unwrap();
        let eps = crate::operator::trace_distance(&rho, &sigma).unwrap();
        let e = re_faithful_cb(&rho, &sigma, &omega, 1.0, 2.0, 1.0, eps).unwrap();
        assert!(e[0].passes(1e-9));
        assert!(re_faithful_cb(&rho, &sigma, &omega, 1.0, 2.0, 1e-3, eps).is_err());
    }

    #[test]
    fn dominated_bounds_hold_and_order() {
        let (rho, sigma) = commuting_pair(4, 0.3, 9).unwrap();
        let omega = rho.mix(&DensityMatrix::maximally_mixed(4), 0.5).unwrap();
        let e = re_dominated_scb(&rho, &sigma, &omega, 0.5, 0.3, DominatedMode::OneSided).unwrap();
        let up = find(&e, "prop5.re").unwrap();
        let env = find(&e, "remark9.envelope").unwrap();
        let exact = find(&e, "prop5.re.exact").unwrap();
        assert!(up.passes(1e-9) && env.passes(1e-9) && exact.passes(1e-9));
        assert!(exact.bound_value <= env.bound_value + 1e-12 && env.bound_value <= up.bound_value + 1e-12);
        assert!(re_dominated_scb(&rho, &sigma, &omega, 0.9, 0.3, DominatedMode::OneSided).is_err());
        let (v_up, v_exact, v_env) = dominated_values(0.5, 0.1);
        assert!((v_exact - (eta(0.05) / 0.5 + h(0.1))).abs() < 1e-15);
        assert!(v_exact <= v_env + 1e-12 && v_env <= v_up + 1e-12);
    }
}
