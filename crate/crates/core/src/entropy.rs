//! Entropic functionals on density matrices and positive operators.

use crate::error::{invalid, Error, Result};
use crate::operator::{
    partial_trace, tensor, CMatrix, DensityMatrix, HermitianMatrix, PositiveOperator, Subsystem, POSITIVITY_TOL,
    SUPPORT_TOL, TRACE_TOL,
};
use crate::scalar::eta;
use crate::spectrum::HamiltonianSpectrum;

/// `Σ η(λ_i)` over nonnegative weights.
pub fn shannon(values: &[f64]) -> f64 {
    values.iter().map(|&x| eta(x)).sum()
}

/// `S̃` on a weight vector: `Σ η(λ_i) − η(Σ λ_i)`.
pub fn shannon_extended(values: &[f64]) -> f64 {
    let total: f64 = values.iter().sum();
    shannon(values) - eta(total)
}

/// `S(ρ)`, or its homogeneous extension `S̃(A) = Σ η(λ_i) − η(Tr A)` when
/// `extended` is set. The plain form requires unit trace.
pub fn von_neumann_entropy<P: PositiveOperator>(op: &P, extended: bool) -> Result<f64> {
    let min = op.hermitian().min_eigenvalue();
    if min < -POSITIVITY_TOL {
        return Err(Error::NotPositive(min));
    }
    let values = op.nonneg_eigenvalues();
    if extended {
        return Ok(shannon_extended(&values));
    }
    let tr = op.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(invalid(
            "extended",
            format!("trace {tr} differs from 1; the extended entropy is required"),
        ));
    }
    Ok(shannon(&values))
}

pub fn entropy(rho: &DensityMatrix) -> f64 {
    shannon(&rho.eigenvalues())
}

pub fn extended_entropy<P: PositiveOperator>(op: &P) -> f64 {
    shannon_extended(&op.nonneg_eigenvalues())
}

/// `Tr A ln B` restricted to the support of `B`, or `None` when the support of
/// `A` is not contained in that of `B`.
fn cross_term(a: &HermitianMatrix, b: &HermitianMatrix) -> Option<f64> {
    let sb = b.spectral();
    let rotated = sb.vectors.adjoint() * a.matrix() * &sb.vectors;
    let mut cross = 0.0;
    let mut leak = 0.0;
    for (j, &w) in sb.values.iter().enumerate() {
        let weight = rotated[(j, j)].re;
        if w > SUPPORT_TOL {
            cross += weight * w.ln();
        } else {
            leak += weight.max(0.0);
        }
    }
    (leak <= SUPPORT_TOL).then_some(cross)
}

/// `D(ρ‖ω) = Tr ρ(ln ρ − ln ω)`, `+∞` when `supp ρ ⊄ supp ω`.
pub fn relative_entropy(rho: &DensityMatrix, omega: &DensityMatrix) -> Result<f64> {
    if rho.dim() != omega.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), omega.dim()));
    }
    match cross_term(rho.hermitian(), omega.hermitian()) {
        None => Ok(f64::INFINITY),
        Some(cross) => Ok((-entropy(rho) - cross).max(0.0)),
    }
}

/// Lindblad's extension to positive operators:
/// `D(A‖B) = Tr A ln A − Tr A ln B + Tr B − Tr A`.
pub fn relative_entropy_positive(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    for op in [a, b] {
        let min = op.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
    }
    let a_ln_a: f64 = a.eigenvalues().iter().map(|&x| -eta(x.max(0.0))).sum();
    match cross_term(a, b) {
        None => Ok(f64::INFINITY),
        Some(cross) => Ok(a_ln_a - cross + b.trace() - a.trace()),
    }
}

fn marginal_entropies(rho: &DensityMatrix, dims: (usize, usize)) -> Result<(f64, f64, f64)> {
    let a = partial_trace(rho, dims, Subsystem::A)?;
    let b = partial_trace(rho, dims, Subsystem::B)?;
    Ok((entropy(rho), entropy(&a), entropy(&b)))
}

/// `S(A|B) = S(ρ_AB) − S(ρ_B)`.
pub fn conditional_entropy(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let (ab, _, b) = marginal_entropies(rho, dims)?;
    Ok(ab - b)
}

/// `S(ρ_A) − D(ρ_AB ‖ ρ_A ⊗ ρ_B)`; coincides with [`conditional_entropy`] in
/// finite dimensions and serves as an independent cross-check.
pub fn conditional_entropy_via_divergence(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let a = partial_trace(rho, dims, Subsystem::A)?;
    let b = partial_trace(rho, dims, Subsystem::B)?;
    Ok(entropy(&a) - relative_entropy(rho, &tensor(&a, &b)?)?)
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let (ab, a, b) = marginal_entropies(rho, dims)?;
    Ok((a + b - ab).max(0.0))
}

/// `Σ_k h_k^a ⟨τ_k|ρ|τ_k⟩` with `τ_k` the columns of `basis` (computational
/// basis when `None`).
pub fn energy_moment(rho: &DensityMatrix, spec: &HamiltonianSpectrum, a: f64, basis: Option<&CMatrix>) -> Result<f64> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(invalid("a", format!("moment order must be ≥ 1, got {a}")));
    }
    if let Some(u) = basis {
        if u.nrows() != rho.dim() || u.ncols() != rho.dim() {
            return Err(Error::DimensionMismatch(u.nrows(), rho.dim()));
        }
    }
    let levels = spec.levels(rho.dim())?;
    let diag = rho.hermitian().diagonal_in(basis);
    Ok(levels
        .iter()
        .zip(&diag)
        .map(|(&hk, &p)| if hk == 0.0 { 0.0 } else { hk.powf(a) * p.max(0.0) })
        .sum())
}

/// `Tr H A` for a positive operator `A` written in the eigenbasis of `H`.
pub fn energy_of_positive<P: PositiveOperator>(op: &P, levels: &[f64]) -> Result<f64> {
    if levels.len() != op.dim() {
        return Err(Error::DimensionMismatch(levels.len(), op.dim()));
    }
    let diag = op.hermitian().diagonal_in(None);
    Ok(levels.iter().zip(&diag).map(|(h, p)| h * p.max(0.0)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{cap_at, clip_below, CVector};
    use num_complex::Complex64;
    use std::f64::consts::LN_2;

    fn bell() -> DensityMatrix {
        let s = 1.0 / 2f64.sqrt();
        let z = Complex64::new(0.0, 0.0);
        DensityMatrix::pure(&CVector::from_vec(vec![
            Complex64::new(s, 0.0),
            z,
            z,
            Complex64::new(s, 0.0),
        ]))
        .unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&DensityMatrix::maximally_mixed(2)) - LN_2).abs() < 1e-14);
        assert!(entropy(&bell()).abs() < 1e-12);
        let rho = DensityMatrix::diagonal(&[0.6, 0.4]).unwrap();
        let clipped = clip_below(&rho, 0.25).unwrap();
        let expected = eta(0.35) + eta(0.15) - eta(0.5);
        assert!((von_neumann_entropy(&clipped, true).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.305_432_151_027).abs() < 1e-9);
        assert!(von_neumann_entropy(&clipped, false).is_err());
        let capped = cap_at(&rho, 0.0).unwrap();
        assert_eq!(von_neumann_entropy(&capped, true).unwrap(), 0.0);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let omega = DensityMatrix::maximally_mixed(2);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        let expected = 0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln();
        assert!((relative_entropy(&rho, &omega).unwrap() - expected).abs() < 1e-12);
        let zero = DensityMatrix::basis_state(2, 0).unwrap();
        let one = DensityMatrix::basis_state(2, 1).unwrap();
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&one, &omega).unwrap().is_finite());
    }

    #[test]
    fn lindblad_scaling() {
        let rho = DensityMatrix::diagonal(&[0.7, 0.2, 0.1]).unwrap();
        let sigma = DensityMatrix::diagonal(&[0.3, 0.3, 0.4]).unwrap();
        let d = relative_entropy(&rho, &sigma).unwrap();
        let c = 0.4;
        let lhs = relative_entropy_positive(&rho.hermitian().scale(c), &sigma.hermitian().scale(c)).unwrap();
        assert!((lhs - c * d).abs() < 1e-12);
        let shifted = relative_entropy_positive(rho.hermitian(), &sigma.hermitian().scale(c)).unwrap();
        assert!((shifted - (d - c.ln() + (c - 1.0))).abs() < 1e-12);
    }

    #[test]
    fn conditional_and_mutual_examples() {
        let a = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::diagonal(&[0.5, 0.25, 0.25]).unwrap();
        let ab = tensor(&a, &b).unwrap();
        assert!((conditional_entropy(&ab, (2, 3)).unwrap() - entropy(&a)).abs() < 1e-12);
        assert!(mutual_information(&ab, (2, 3)).unwrap().abs() < 1e-12);

        assert!((conditional_entropy(&bell(), (2, 2)).unwrap() + LN_2).abs() < 1e-12);
        assert!((mutual_information(&bell(), (2, 2)).unwrap() - 2.0 * LN_2).abs() < 1e-12);

        let cc = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(conditional_entropy(&cc, (2, 2)).unwrap().abs() < 1e-12);
        assert!((mutual_information(&cc, (2, 2)).unwrap() - LN_2).abs() < 1e-12);
        assert!(conditional_entropy(&cc, (3, 2)).is_err());
    }

    #[test]
    fn divergence_form_matches() {
        let cc = DensityMatrix::diagonal(&[0.4, 0.1, 0.2, 0.3]).unwrap();
        let direct = conditional_entropy(&cc, (2, 2)).unwrap();
        let via = conditional_entropy_via_divergence(&cc, (2, 2)).unwrap();
        assert!((direct - via).abs() < 1e-10);
    }

    #[test]
    fn energy_moment_examples() {
        let osc = HamiltonianSpectrum::oscillator();
        let ground = DensityMatrix::basis_state(4, 0).unwrap();
        let third = DensityMatrix::basis_state(4, 2).unwrap();
        for a in [1.0, 2.0, 3.5] {
            assert_eq!(energy_moment(&ground, &osc, a, None).unwrap(), 0.0);
            assert!((energy_moment(&third, &osc, a, None).unwrap() - 2f64.powf(a)).abs() < 1e-12);
        }
        let gibbs = DensityMatrix::diagonal(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let qubit = HamiltonianSpectrum::explicit(vec![0.0, 1.0]).unwrap();
        assert!((energy_moment(&gibbs, &qubit, 1.0, None).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(energy_moment(&third, &qubit, 1.0, None).is_err());
    }
}
