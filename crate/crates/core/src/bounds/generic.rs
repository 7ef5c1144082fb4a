use serde::{Deserialize, Serialize};

use super::check_unit;
use crate::error::{invalid, Result};
use crate::scalar::{envelope, h, h_up, EnvelopeKind};

/// Parameters of a function class `L_n^m(C, D)`: `C` weighs the logarithmic
/// (or energy) term, `D` the binary-entropy term, and the constraint acts on
/// the first `m` of `n` subsystems.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub c: f64,
    pub d: f64,
    pub m: usize,
    pub n: usize,
}

impl ClassParams {
    pub fn new(c: f64, d: f64, m: usize, n: usize) -> Result<Self> {
        if !(c >= 0.0) || !(d >= 0.0) {
            return Err(invalid("C, D", format!("must be nonnegative, got ({c}, {d})")));
        }
        if m == 0 || m > n {
            return Err(invalid("m", format!("need 1 ≤ m ≤ n, got m = {m}, n = {n}")));
        }
        Ok(Self { c, d, m, n })
    }
}

fn with_entropy_term(kind: EnvelopeKind, eps: f64, d: f64, main: impl Fn(f64) -> f64) -> f64 {
    match kind {
        EnvelopeKind::Exact => main(eps) + d * h(eps),
        EnvelopeKind::HUp => main(eps) + d * h_up(eps),
        EnvelopeKind::Envelope => envelope(|t| main(t) + d * h(t), eps),
    }
}

/// `Cε ln d_m + D·h(ε)` in the selected form. `d_m` is the product of the
/// ranks of the constrained marginals, or `d_* − 1` in the single-system
/// refinement.
pub fn generic_rank_bound(p: &ClassParams, d_m: f64, eps: f64, kind: EnvelopeKind) -> Result<f64> {
    check_unit("epsilon", eps)?;
    if !(d_m >= 1.0) {
        return Err(invalid("d_m", format!("rank product must be at least 1, got {d_m}")));
    }
    let ln_d = d_m.ln();
    Ok(with_entropy_term(kind, eps, p.d, |t| p.c * t * ln_d))
}

/// `Cε F_{H_m}(mE/ε) + D·h(ε)` in the selected form, with `f_hm` evaluating
/// `F_{H_m}`. In one-sided use `energy` may be the refined `E(ρ) − E_ε(ρ)`.
pub fn generic_energy_bound(
    p: &ClassParams,
    f_hm: &dyn Fn(f64) -> Result<f64>,
    energy: f64,
    eps: f64,
    kind: EnvelopeKind,
) -> Result<f64> {
    check_unit("epsilon", eps)?;
    if !(energy >= 0.0) {
        return Err(invalid("energy", format!("{energy} must be nonnegative")));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let m = p.m as f64;
    let main = |t: f64| -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match f_hm(m * energy / t) {
            Ok(f) => p.c * t * f,
            Err(_) => f64::NAN,
        }
    };
    let value = with_entropy_term(kind, eps, p.d, main);
    f_hm(m * energy / eps)?;
    if value.is_nan() {
        return Err(invalid("energy", "F_{H_m} failed inside the envelope"));
    }
    Ok(value)
}
