//! Real scalar functions shared by every bound: `η`, the binary entropy `h`,
//! their nondecreasing envelopes, the oscillator entropy `g` and a numerical
//! envelope transform for concave one-parameter expressions.

use std::f64::consts::{E, LN_2};

use serde::Serialize;

use crate::error::{invalid, Result};

const INV_E: f64 = 1.0 / E;

/// `η(x) = −x ln x` with `η(0) = 0`.
pub fn eta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// `η↑(x)`: `η(x)` up to `1/e`, then `1/e`.
pub fn eta_up(x: f64) -> f64 {
    if x <= INV_E {
        eta(x)
    } else {
        INV_E
    }
}

/// Binary entropy `η(x) + η(1 − x)`.
pub fn h(x: f64) -> f64 {
    eta(x) + eta(1.0 - x)
}

/// `h↑(x)`: `h(x)` up to `½`, then `ln 2`.
pub fn h_up(x: f64) -> f64 {
    if x <= 0.5 {
        h(x)
    } else {
        LN_2
    }
}

/// `g(x) = (x + 1) ln(x + 1) − x ln x`, the entropy of the oscillator Gibbs
/// state with mean photon number `x`.
pub fn g(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 1.0) * x.ln_1p() - x * x.ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BinaryEntropyFamily {
    pub h: f64,
    pub h_up: f64,
    pub eta: f64,
    pub eta_up: f64,
}

pub fn binary_entropy_family(x: f64) -> Result<BinaryEntropyFamily> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid("x", format!("{x} not in [0, 1]")));
    }
    Ok(BinaryEntropyFamily {
        h: h(x),
        h_up: h_up(x),
        eta: eta(x),
        eta_up: eta_up(x),
    })
}

pub fn g_function(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid("x", format!("{x} must be a finite nonnegative number")));
    }
    Ok(g(x))
}

/// Which binary-entropy term multiplies `D` in a generic bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    /// `h(ε)`; valid only when the distance equals `ε`.
    Exact,
    /// `{·}↑` of the whole expression, computed numerically.
    Envelope,
    /// `h↑(ε)` substituted term by term.
    HUp,
}

const GRID: usize = 64;
const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// `f↑(x) = sup_{t ∈ [0, x]} f(t)`.
///
/// A uniform grid locates the best cell and golden-section search refines it,
/// which is exact up to `~1e-12` relative error for the unimodal functions
/// that appear as bound expressions. The result is never below `f(x)` or `f(0)`.
pub fn envelope(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f(0.0_f64.max(x));
    }
    let step = x / GRID as f64;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=GRID {
        let v = f(step * i as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut a = step * best_i.saturating_sub(1) as f64;
    let mut b = (step * (best_i + 1) as f64).min(x);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
        if b - a < 1e-15 * x.max(1.0) {
            break;
        }
    }
    best.max(fc).max(fd).max(f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_family_values() {
        let f = binary_entropy_family(0.0).unwrap();
        assert_eq!((f.h, f.eta), (0.0, 0.0));
        let f = binary_entropy_family(0.5).unwrap();
        assert!((f.h - LN_2).abs() < 1e-15 && (f.h_up - LN_2).abs() < 1e-15);
        assert!((binary_entropy_family(0.8).unwrap().h_up - LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy_family(1.0).unwrap().h, 0.0);
        assert!(binary_entropy_family(1.5).is_err());
        assert!(binary_entropy_family(-0.1).is_err());
        assert!((eta_up(0.9) - INV_E).abs() < 1e-15);
    }

    #[test]
    fn g_values() {
        assert_eq!(g_function(0.0).unwrap(), 0.0);
        assert!((g(1.0) - 2.0 * LN_2).abs() < 1e-15);
        let expected = 3.0 * 3f64.ln() - 2.0 * 2f64.ln();
        assert!((g(2.0) - expected).abs() < 1e-14);
        assert!((g(2.0) - 1.909_542_504_884_438_5).abs() < 1e-12);
        assert!(g_function(-1.0).is_err());
    }

    #[test]
    fn g_dominates_h() {
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!(g(x) > h(x));
        }
    }

    #[test]
    fn envelope_of_h_is_h_up() {
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!((envelope(h, x) - h_up(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn envelope_of_eta_is_eta_up() {
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!((envelope(eta, x) - eta_up(x)).abs() < 1e-12, "x = {x}");
        }
    }
}
