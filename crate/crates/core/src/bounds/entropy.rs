use super::{check_positive_unit, check_unit, digest_matrices, BoundEvaluation};
use crate::entropy::{energy_moment, entropy, extended_entropy};
use crate::error::{invalid, Error, Result};
use crate::gibbs::{f_of_e_clamped, truncate_hamiltonian, z_of_e};
use crate::jordan::{jordan_split, jordan_split_general};
use crate::operator::{cap_at, clip_below, commute, trace_distance, DensityMatrix, PositiveOperator, SUPPORT_TOL};
use crate::scalar::{h, h_up};
use crate::spectrum::HamiltonianSpectrum;
use crate::stategen::partially_majorizes;

/// Slack allowed when certifying `½‖ρ − σ‖₁ ≤ ε` or `= ε`.
pub(crate) const DISTANCE_TOL: f64 = 1e-10;

pub(crate) fn check_distance(rho: &DensityMatrix, sigma: &DensityMatrix, eps: f64) -> Result<f64> {
    let td = trace_distance(rho, sigma)?;
    if td > eps + DISTANCE_TOL {
        return Err(Error::Precondition(format!("trace distance {td} exceeds ε = {eps}")));
    }
    Ok(td)
}

fn check_majorization(rho: &DensityMatrix, sigma: &DensityMatrix, m: usize) -> Result<usize> {
    let rank = rho.rank();
    if m == 0 || m >= rank {
        return Err(Error::Precondition(format!(
            "need 1 ≤ m < rank ρ, got m = {m}, rank = {rank}"
        )));
    }
    if !partially_majorizes(&rho.eigenvalues(), &sigma.eigenvalues(), m) {
        return Err(Error::Precondition(format!("σ is not {m}-partially majorized by ρ")));
    }
    Ok(rank)
}

/// `ε ln(d − m) + h(ε)` up to `1 − 1/(d − m + 1)`, then `ln(d − m + 1)`.
pub fn rank_scb_value(d: usize, m: usize, eps: f64) -> Result<f64> {
    check_unit("epsilon", eps)?;
    if m == 0 || m >= d {
        return Err(invalid("m", format!("need 1 ≤ m < d, got m = {m}, d = {d}")));
    }
    let k = (d - m) as f64;
    Ok(if eps <= 1.0 - 1.0 / (k + 1.0) {
        eps * k.ln() + h(eps)
    } else {
        (k + 1.0).ln()
    })
}

/// Semicontinuity bound under a rank constraint and `m`-partial
/// majorization: `thm3a.rank`.
pub fn entropy_scb_rank(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    m: usize,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_unit("epsilon", eps)?;
    check_distance(rho, sigma, eps)?;
    let d = check_majorization(rho, sigma, m)?;
    let bound = rank_scb_value(d, m, eps)?;
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![BoundEvaluation::upper(
        "thm3a.rank",
        eps,
        bound,
        entropy(rho) - entropy(sigma),
        &digest,
    )])
}

/// The two energy-constrained forms for given `E_m`:
/// `(piecewise bound, εF_{H⁰_m}(E_m/ε) + h↑(ε))`.
pub fn energy_scb_values(spec: &HamiltonianSpectrum, m: usize, e_m: f64, eps: f64) -> Result<(f64, f64)> {
    check_unit("epsilon", eps)?;
    let trunc = truncate_hamiltonian(spec, m)?;
    let e_m = e_m.max(0.0);
    if eps == 0.0 {
        return Ok((0.0, 0.0));
    }
    let threshold = energy_scb_threshold(spec, m, e_m)?;
    let piecewise = if eps <= threshold {
        eps * f_of_e_clamped(&trunc.h_m, e_m / eps)? + h(eps)
    } else {
        f_of_e_clamped(&trunc.h0_m, e_m)?
    };
    let simple = eps * f_of_e_clamped(&trunc.h0_m, e_m / eps)? + h_up(eps);
    Ok((piecewise, simple))
}

/// `1 − 1/Z_{H⁰_m}(E_m)`, below which the piecewise bound takes its
/// `εF_{H_m}(E_m/ε) + h(ε)` branch.
pub fn energy_scb_threshold(spec: &HamiltonianSpectrum, m: usize, e_m: f64) -> Result<f64> {
    if !(e_m > 0.0) {
        return Ok(0.0);
    }
    let trunc = truncate_hamiltonian(spec, m)?;
    Ok(1.0 - 1.0 / z_of_e(&trunc.h0_m, e_m)?)
}

/// `E_m = Tr Hρ − Σ_{i≤m} h_i λ↓_i(ρ)` with `H` diagonal in the computational
/// basis.
pub fn reduced_energy(rho: &DensityMatrix, spec: &HamiltonianSpectrum, m: usize) -> Result<f64> {
    let energy = energy_moment(rho, spec, 1.0, None)?;
    let levels = spec.levels(m.min(rho.dim()))?;
    let lambda = rho.eigenvalues();
    let head: f64 = levels.iter().zip(&lambda).map(|(h, l)| h * l).sum();
    Ok((energy - head).max(0.0))
}

/// Semicontinuity bound under an energy constraint and `m`-partial
/// majorization: `thm3b.energy` and the simplified `remark6.energy`. When
/// `ε` lies below [`energy_scb_threshold`], `dominance.thm3b` compares the
/// two.
pub fn entropy_scb_energy(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    spec: &HamiltonianSpectrum,
    m: usize,
    eps: f64,
) -> Result<Vec<BoundEvaluation>> {
    check_unit("epsilon", eps)?;
    check_distance(rho, sigma, eps)?;
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    if m > 1 && !partially_majorizes(&rho.eigenvalues(), &sigma.eigenvalues(), m) {
        return Err(Error::Precondition(format!("σ is not {m}-partially majorized by ρ")));
    }
    let e_m = reduced_energy(rho, spec, m)?;
    let (piecewise, simple) = energy_scb_values(spec, m, e_m, eps)?;
    let gap = entropy(rho) - entropy(sigma);
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    let mut out = vec![
        BoundEvaluation::upper("thm3b.energy", eps, piecewise, gap, &digest),
        BoundEvaluation::upper("remark6.energy", eps, simple, gap, &digest),
    ];
    if eps <= energy_scb_threshold(spec, m, e_m)? {
        out.push(BoundEvaluation::upper(
            "dominance.thm3b",
            eps,
            simple,
            piecewise,
            &digest,
        ));
    }
    Ok(out)
}

/// `S̃(ρ ∧ εI) + h↑(ε)`.
pub fn truncation_scb_value(rho: &DensityMatrix, eps: f64) -> Result<f64> {
    check_positive_unit("epsilon", eps)?;
    Ok(extended_entropy(&cap_at(rho, eps)?) + h_up(eps))
}

/// `S̃([ρ − εI]₊) − h↑(ε)`.
pub fn llb_value(rho: &DensityMatrix, eps: f64) -> Result<f64> {
    check_positive_unit("epsilon", eps)?;
    Ok(extended_entropy(&clip_below(rho, eps)?) - h_up(eps))
}

/// `prop1.truncation`: `S(ρ) − S(σ) ≤ S̃(ρ ∧ εI) + h↑(ε)` for arbitrary pairs.
pub fn entropy_truncation_scb(rho: &DensityMatrix, sigma: &DensityMatrix, eps: f64) -> Result<Vec<BoundEvaluation>> {
    check_distance(rho, sigma, eps)?;
    let bound = truncation_scb_value(rho, eps)?;
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![BoundEvaluation::upper(
        "prop1.truncation",
        eps,
        bound,
        entropy(rho) - entropy(sigma),
        &digest,
    )])
}

/// `prop2.llb`: `S(σ) ≥ S̃([ρ − εI]₊) − h↑(ε)` for arbitrary pairs.
pub fn entropy_llb(rho: &DensityMatrix, sigma: &DensityMatrix, eps: f64) -> Result<Vec<BoundEvaluation>> {
    check_distance(rho, sigma, eps)?;
    let bound = llb_value(rho, eps)?;
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![BoundEvaluation::lower(
        "prop2.llb",
        eps,
        bound,
        entropy(sigma),
        &digest,
    )])
}

/// `cor1.entropy.d_star`: `|S(ρ) − S(σ)| ≤ ε ln(d_* − 1) + h(ε)` for commuting
/// states at trace distance exactly `ε`, where `d_*` is the dimension of the
/// joint support. At distances strictly below `ε` the `h↑` form is used.
pub fn entropy_joint_support_cb(rho: &DensityMatrix, sigma: &DensityMatrix, eps: f64) -> Result<Vec<BoundEvaluation>> {
    check_positive_unit("epsilon", eps)?;
    let td = check_distance(rho, sigma, eps)?;
    if !commute(rho, sigma) {
        return Err(Error::Precondition("[ρ, σ] = 0".into()));
    }
    let joint = rho.mix(sigma, 0.5)?;
    let d_star = joint.hermitian().spectral().rank(SUPPORT_TOL);
    let ln_d = ((d_star.max(2) - 1) as f64).ln();
    let entropy_term = if (td - eps).abs() <= DISTANCE_TOL {
        h(eps)
    } else {
        h_up(eps)
    };
    let bound = eps * ln_d + entropy_term;
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![BoundEvaluation::upper(
        "cor1.entropy.d_star",
        eps,
        bound,
        (entropy(rho) - entropy(sigma)).abs(),
        &digest,
    )])
}

/// Concavity defect of the entropy under mixing with weight `p`:
/// `0 ≤ S(pρ + (1−p)σ) − pS(ρ) − (1−p)S(σ) ≤ h(p)`.
pub fn entropy_concavity(rho: &DensityMatrix, sigma: &DensityMatrix, p: f64) -> Result<Vec<BoundEvaluation>> {
    check_unit("p", p)?;
    let mix = rho.mix(sigma, p)?;
    let defect = entropy(&mix) - p * entropy(rho) - (1.0 - p) * entropy(sigma);
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![
        BoundEvaluation::upper("eq2.concavity", p, h(p), defect, &digest),
        BoundEvaluation::lower("eq2.concavity.lower", p, 0.0, defect, &digest),
    ])
}

/// `S(ρ) + εS(τ₋) ≤ S(σ) + εS(τ₊) + h(ε)` with `ε = ½‖ρ − σ‖₁` and
/// `τ± = [ρ − σ]±/ε`, for commuting states.
pub fn split_entropy_inequality_commuting(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Vec<BoundEvaluation>> {
    let split = jordan_split(rho, sigma)?;
    let eps = split.epsilon;
    let gap = entropy(rho) + eps * entropy(&split.tau_minus) - entropy(sigma) - eps * entropy(&split.tau_plus);
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![BoundEvaluation::upper(
        "eq38.commuting",
        eps,
        h(eps),
        gap,
        &digest,
    )])
}

/// The same inequality for arbitrary pairs (`eq38.general`).
pub fn split_entropy_inequality(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Vec<BoundEvaluation>> {
    let split = jordan_split_general(rho, sigma)?;
    let eps = split.epsilon;
    let gap = entropy(rho) + eps * entropy(&split.tau_minus) - entropy(sigma) - eps * entropy(&split.tau_plus);
    let digest = digest_matrices(&[rho.matrix(), sigma.matrix()]);
    Ok(vec![BoundEvaluation::upper("eq38.general", eps, h(eps), gap, &digest)])
}

/// `Σ_i |λ↓_i(A) − λ↓_i(B)| ≤ ‖A − B‖₁`.
pub fn mirsky<P: PositiveOperator>(a: &P, b: &P) -> Result<Vec<BoundEvaluation>> {
    let diff = a.hermitian().sub(b.hermitian())?;
    let la = a.hermitian().eigenvalues();
    let lb = b.hermitian().eigenvalues();
    let lhs: f64 = la.iter().zip(lb).map(|(x, y)| (x - y).abs()).sum();
    let norm = diff.trace_norm();
    let digest = digest_matrices(&[a.hermitian().matrix(), b.hermitian().matrix()]);
    Ok(vec![BoundEvaluation::upper("mirsky", 0.5 * norm, norm, lhs, &digest)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{eta, g};
    use crate::stategen::{commuting_pair, partial_majorized_pair, random_density};
    use std::f64::consts::LN_2;

    #[test]
    fn rank_values() {
        assert!((rank_scb_value(2, 1, 0.3).unwrap() - h(0.3)).abs() < 1e-15);
        assert!((rank_scb_value(2, 1, 0.3).unwrap() - 0.6109).abs() < 1e-4);
        assert!((rank_scb_value(2, 1, 0.75).unwrap() - LN_2).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = rank_scb_value(5, 2, i as f64 / 100.0).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert!(rank_scb_value(2, 2, 0.1).is_err());
    }

    #[test]
    fn rank_bound_on_pairs() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let e = entropy_scb_rank(&rho, &rho, 1, 0.2).unwrap();
        assert_eq!(e[0].measured_gap, 0.0);
        for seed in 0..20 {
            let (r, s) = partial_majorized_pair(4, 2, 0.3, seed).unwrap();
            assert!(entropy_scb_rank(&r, &s, 2, 0.3).unwrap()[0].passes(1e-9));
        }
        let pure = DensityMatrix::basis_state(2, 0).unwrap();
        assert!(entropy_scb_rank(&pure, &pure, 1, 0.1).is_err());
    }

    #[test]
    fn simplified_energy_form_example() {
        let osc = HamiltonianSpectrum::oscillator();
        let (_, simple) = energy_scb_values(&osc, 1, 1.0, 0.5).unwrap();
        assert!((simple - (0.5 * g(2.0) + LN_2)).abs() < 1e-9);
        assert!((simple - 1.6479).abs() < 1e-4);
        let mut prev = f64::INFINITY;
        for k in 1..=5 {
            let (p, s) = energy_scb_values(&osc, 1, 1.0, 10f64.powi(-k)).unwrap();
            assert!(p <= s + 1e-12 && p < prev);
            prev = p;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn gibbs_state_against_itself() {
        let osc = HamiltonianSpectrum::oscillator();
        let rho = crate::gibbs::gibbs_state(
            &HamiltonianSpectrum::explicit(vec![0.0, 1.0, 2.0, 3.0]).unwrap(),
            0.8,
            4,
        )
        .unwrap();
        let e = entropy_scb_energy(&rho, &rho, &osc, 1, 0.1).unwrap();
        assert!(e.iter().all(|x| x.passes(1e-9)));
        assert!(e[..2].iter().all(|x| x.measured_gap == 0.0));
        assert!(crate::bounds::find(&e, "dominance.thm3b").is_some());
    }

    #[test]
    fn energy_form_is_optimal_on_qubit_example() {
        let spec = HamiltonianSpectrum::explicit(vec![0.0, 1.0]).unwrap();
        let rho = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let sigma = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let e = entropy_scb_energy(&rho, &sigma, &spec, 1, 0.2).unwrap();
        assert!(e[0].passes(1e-9) && e[1].passes(1e-9));
        assert!(e[0].bound_value <= e[1].bound_value + 1e-12);
    }

    #[test]
    fn truncation_examples() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let v = truncation_scb_value(&rho, 0.25).unwrap();
        let expected = 2.0 * eta(0.25) - eta(0.5) + h(0.25);
        assert!((v - expected).abs() < 1e-12);
        assert!((v - (0.5 * LN_2 + h(0.25))).abs() < 1e-12);
        let big = truncation_scb_value(&rho, 0.7).unwrap();
        assert!((big - (entropy(&rho) + LN_2)).abs() < 1e-12);
        assert_eq!(entropy_truncation_scb(&rho, &rho, 0.1).unwrap()[0].measured_gap, 0.0);
    }

    #[test]
    fn llb_examples() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let v = llb_value(&rho, 0.25).unwrap();
        let s_tilde = eta(0.35) + eta(0.15) - eta(0.5);
        assert!((s_tilde - 0.305_432_151_027).abs() < 1e-11);
        assert!((v - (s_tilde - h(0.25))).abs() < 1e-12);
        assert!((llb_value(&rho, 0.6).unwrap() + LN_2).abs() < 1e-12);
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=8 {
            let b = llb_value(&rho, 10f64.powi(-k)).unwrap();
            assert!(b > prev);
            prev = b;
        }
        assert!((prev - entropy(&rho)).abs() < 1e-6);
    }

    #[test]
    fn split_inequality_and_mirsky_on_random_pairs() {
        for seed in 0..30 {
            let (r, s) = commuting_pair(4, 0.35, seed).unwrap();
            let e = split_entropy_inequality_commuting(&r, &s).unwrap();
            assert!((e[0].epsilon - 0.35).abs() < 1e-10 && e[0].passes(1e-9));
            let a = random_density(3, 3, seed).unwrap();
            let b = random_density(3, 2, seed + 100).unwrap();
            assert!(mirsky(&a, &b).unwrap()[0].passes(1e-10));
            assert!(entropy_concavity(&a, &b, 0.3).unwrap().iter().all(|x| x.passes(1e-9)));
        }
        let a = random_density(3, 3, 1).unwrap();
        assert!(split_entropy_inequality_commuting(&a, &random_density(3, 3, 2).unwrap()).is_err());
    }

    #[test]
    fn d_star_refinement_is_tight_on_qubits() {
        let rho = DensityMatrix::diagonal(&[1.0, 0.0, 0.0]).unwrap();
        let sigma = DensityMatrix::diagonal(&[0.7, 0.3, 0.0]).unwrap();
        let e = entropy_joint_support_cb(&rho, &sigma, 0.3).unwrap();
        assert!(e[0].slack.abs() < 1e-12);
    }
}
