//! Jordan decomposition of a pair of states into a common part and two
//! mutually orthogonal remainders.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{
    commutator_norm, trace_distance, DensityMatrix, HermitianMatrix, PositiveOperator, COMMUTATION_TOL,
};

/// Below this trace distance the two states are treated as equal.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// `ρ = ε τ₊ + (1 − ε) ω*`, `σ = ε τ₋ + (1 − ε) ω*` with `τ₊ ⟂ τ₋`.
#[derive(Clone, Debug)]
pub struct JordanSplit {
    pub epsilon: f64,
    pub tau_plus: DensityMatrix,
    pub tau_minus: DensityMatrix,
    pub omega_star: DensityMatrix,
}

impl JordanSplit {
    /// Largest entrywise deviation of the two reconstructions.
    pub fn reconstruction_error(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
        let e = Complex64::new(self.epsilon, 0.0);
        let w = Complex64::new(1.0 - self.epsilon, 0.0);
        let r = self.tau_plus.matrix() * e + self.omega_star.matrix() * w - rho.matrix();
        let s = self.tau_minus.matrix() * e + self.omega_star.matrix() * w - sigma.matrix();
        r.iter().chain(s.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `τ₊ τ₋`; zero iff the supports are orthogonal.
    pub fn support_overlap(&self) -> f64 {
        (self.tau_plus.matrix() * self.tau_minus.matrix()).norm()
    }
}

/// Positive and negative parts of `ρ − σ` for arbitrary (possibly
/// non-commuting) states. No common part `ω*` is produced because
/// `ρ − ε τ₊` need not be positive.
#[derive(Clone, Debug)]
pub struct GeneralJordanSplit {
    pub epsilon: f64,
    pub tau_plus: DensityMatrix,
    pub tau_minus: DensityMatrix,
}

fn parts(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(f64, DensityMatrix, DensityMatrix)> {
    let eps = trace_distance(rho, sigma)?;
    if eps < DEGENERACY_TOL {
        return Err(Error::DegenerateSplit(eps));
    }
    let diff = rho.hermitian().sub(sigma.hermitian())?;
    let (pos, neg) = diff.jordan_parts();
    let tau_plus = DensityMatrix::normalized(pos.into_matrix())?;
    let tau_minus = DensityMatrix::normalized(neg.into_matrix())?;
    Ok((eps, tau_plus, tau_minus))
}

/// Jordan split of two commuting states.
pub fn jordan_split(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<JordanSplit> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let comm = commutator_norm(rho.matrix(), sigma.matrix());
    if comm > COMMUTATION_TOL {
        return Err(Error::NotCommuting(comm));
    }
    let (eps, tau_plus, tau_minus) = parts(rho, sigma)?;
    let omega_star = if 1.0 - eps < 1e-12 {
        DensityMatrix::maximally_mixed(rho.dim())
    } else {
        let common = rho.matrix() - tau_plus.matrix() * Complex64::new(eps, 0.0);
        DensityMatrix::normalized(HermitianMatrix::new(common)?.into_matrix())?
    };
    Ok(JordanSplit {
        epsilon: eps,
        tau_plus,
        tau_minus,
        omega_star,
    })
}

/// `τ± = [ρ − σ]±/ε` without the commutation requirement.
pub fn jordan_split_general(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<GeneralJordanSplit> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let (epsilon, tau_plus, tau_minus) = parts(rho, sigma)?;
    Ok(GeneralJordanSplit {
        epsilon,
        tau_plus,
        tau_minus,
    })
}
