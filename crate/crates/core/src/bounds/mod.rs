//! Evaluators for the continuity, semicontinuity and local lower bounds.
//!
//! Every evaluator returns the bound together with the quantity it constrains
//! so that the caller decides PASS/FAIL. Evaluators that cover several
//! variants of one statement return one [`BoundEvaluation`] per variant, each
//! under its own stable identifier.

mod conditional;
mod energy;
mod entropy;
mod eof;
mod generic;
mod identities;
mod relative;

pub use conditional::{
    mi_commuting_energy_cb, mi_commuting_rank_cb, mi_mixing, qce_commuting_cb, qce_mixing, qce_qc_scb,
    qce_qc_truncation_and_llb, MarginalConstraint,
};
pub use energy::{energy_moment_difference, energy_scb};
pub use entropy::{
    energy_scb_threshold, entropy_concavity, entropy_joint_support_cb, entropy_llb, entropy_scb_energy,
    entropy_scb_rank, entropy_truncation_scb, mirsky, reduced_energy, split_entropy_inequality,
    split_entropy_inequality_commuting,
};
pub use eof::{eof_scb, eof_scb_with, fidelity_delta, trace_delta};
pub use generic::{generic_energy_bound, generic_rank_bound, ClassParams};
pub use identities::{d_c_identity, d_mul_identity, re_inequality};
pub use relative::{
    dominated_values, faithful_hamiltonian, gibbs_relative_entropy_gap, oscillator_re_closed_form,
    oscillator_re_refined_closed_form, re_dominated_scb, re_faithful_cb, re_gibbs_cb, re_gibbs_max_term,
    re_gibbs_refined_threshold, DominatedMode, GibbsReference,
};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Result};
use crate::operator::CMatrix;

/// Default relative tolerance of the PASS rule.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Whether the bound caps the measured quantity from above or below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub bound_id: String,
    pub epsilon: f64,
    pub bound_value: f64,
    pub measured_gap: f64,
    pub slack: f64,
    pub sense: Sense,
    pub inputs_digest: String,
}

impl BoundEvaluation {
    /// `measured_gap ≤ bound_value`; `slack = bound − gap`.
    pub fn upper(id: impl Into<String>, epsilon: f64, bound: f64, gap: f64, digest: &str) -> Self {
        Self {
            bound_id: id.into(),
            epsilon,
            bound_value: bound,
            measured_gap: gap,
            slack: bound - gap,
            sense: Sense::Upper,
            inputs_digest: digest.to_string(),
        }
    }

    /// `measured ≥ bound_value`; `slack = measured − bound`.
    pub fn lower(id: impl Into<String>, epsilon: f64, bound: f64, measured: f64, digest: &str) -> Self {
        Self {
            bound_id: id.into(),
            epsilon,
            bound_value: bound,
            measured_gap: measured,
            slack: measured - bound,
            sense: Sense::Lower,
            inputs_digest: digest.to_string(),
        }
    }

    /// `|lhs − rhs| ≤ 0` up to tolerance, for identities.
    pub fn equality(id: impl Into<String>, epsilon: f64, lhs: f64, rhs: f64, digest: &str) -> Self {
        Self::upper(id, epsilon, 0.0, (lhs - rhs).abs(), digest)
    }

    pub fn threshold(&self, tolerance: f64) -> f64 {
        tolerance * self.bound_value.abs().max(1.0)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.slack >= -self.threshold(tolerance)
    }

    /// `gap / bound` for upper bounds and `bound / measured` for lower
    /// bounds; `None` when the denominator vanishes.
    pub fn tightness(&self) -> Option<f64> {
        let (num, den) = match self.sense {
            Sense::Upper => (self.measured_gap, self.bound_value),
            Sense::Lower => (self.bound_value, self.measured_gap),
        };
        (den.abs() > 1e-300 && num.is_finite() && den.is_finite()).then(|| num / den)
    }

    pub fn is_finite(&self) -> bool {
        self.bound_value.is_finite() && self.measured_gap.is_finite()
    }
}

/// Selects the evaluation with the given identifier.
pub fn find<'a>(evals: &'a [BoundEvaluation], id: &str) -> Option<&'a BoundEvaluation> {
    evals.iter().find(|e| e.bound_id == id)
}

/// Short SHA-256 fingerprint of the bit patterns of the input matrices.
pub fn digest_matrices(mats: &[&CMatrix]) -> String {
    let mut hasher = Sha256::new();
    for m in mats {
        hasher.update((m.nrows() as u64).to_le_bytes());
        for z in m.iter() {
            hasher.update(z.re.to_bits().to_le_bytes());
            hasher.update(z.im.to_bits().to_le_bytes());
        }
    }
    hex::encode(&hasher.finalize()[..8])
}

pub(crate) fn check_unit(name: &'static str, eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid(name, format!("{eps} not in [0, 1]")));
    }
    Ok(())
}

pub(crate) fn check_positive_unit(name: &'static str, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(name, format!("{eps} not in (0, 1]")));
    }
    Ok(())
}
