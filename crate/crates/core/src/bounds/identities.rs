//! Identities and elementary inequalities for the relative entropy of
//! positive operators (`D(A‖B) = Tr A ln A − Tr A ln B + Tr B − Tr A`).

use super::{digest_matrices, BoundEvaluation};
use crate::entropy::relative_entropy_positive;
use crate::error::{invalid, Result};
use crate::operator::HermitianMatrix;

fn check_scale(c: f64) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid("c", format!("{c} must be positive and finite")));
    }
    Ok(())
}

/// `D(cA‖cB) = c D(A‖B)` (`identity.d_mul`).
pub fn d_mul_identity(a: &HermitianMatrix, b: &HermitianMatrix, c: f64) -> Result<Vec<BoundEvaluation>> {
    check_scale(c)?;
    let lhs = relative_entropy_positive(&a.scale(c), &b.scale(c))?;
    let rhs = c * relative_entropy_positive(a, b)?;
    let digest = digest_matrices(&[a.matrix(), b.matrix()]);
    Ok(vec![BoundEvaluation::equality("identity.d_mul", c, lhs, rhs, &digest)])
}

/// `D(A‖cB) = D(A‖B) − Tr A ln c + (c − 1) Tr B` (`identity.d_c`).
pub fn d_c_identity(a: &HermitianMatrix, b: &HermitianMatrix, c: f64) -> Result<Vec<BoundEvaluation>> {
    check_scale(c)?;
    let lhs = relative_entropy_positive(a, &b.scale(c))?;
    let rhs = relative_entropy_positive(a, b)? - a.trace() * c.ln() + (c - 1.0) * b.trace();
    let digest = digest_matrices(&[a.matrix(), b.matrix()]);
    Ok(vec![BoundEvaluation::equality("identity.d_c", c, lhs, rhs, &digest)])
}

/// `D(A‖B + C) ≤ D(A‖B) + Tr C` (`inequality.re_sum`).
pub fn re_inequality(a: &HermitianMatrix, b: &HermitianMatrix, c: &HermitianMatrix) -> Result<Vec<BoundEvaluation>> {
    let lhs = relative_entropy_positive(a, &b.add(c)?)?;
    let rhs = relative_entropy_positive(a, b)? + c.trace();
    let digest = digest_matrices(&[a.matrix(), b.matrix(), c.matrix()]);
    Ok(vec![BoundEvaluation::upper(
        "inequality.re_sum",
        c.trace(),
        rhs,
        lhs,
        &digest,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::PositiveOperator;
    use crate::stategen::random_density;

    #[test]
    fn identities_hold_on_random_operators() {
        for seed in 0..5 {
            let a = random_density(3, 3, seed).unwrap().hermitian().scale(0.7);
            let b = random_density(3, 3, seed + 100).unwrap().hermitian().scale(1.3);
            let c = random_density(3, 2, seed + 200).unwrap().hermitian().scale(0.4);
            for s in [0.1, 0.5, 2.0, 7.0] {
                assert!(d_mul_identity(&a, &b, s).unwrap()[0].passes(1e-9));
                assert!(d_c_identity(&a, &b, s).unwrap()[0].passes(1e-9));
            }
            let e = re_inequality(&a, &b, &c).unwrap();
            assert!(e[0].passes(1e-9) && e[0].slack > 0.0);
        }
    }

    #[test]
    fn diagonal_values() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let b = HermitianMatrix::from_real_diagonal(&[0.5, 0.5]);
        let d = relative_entropy_positive(&a, &b).unwrap();
        assert!((d - (2f64.ln())).abs() < 1e-14);
        assert!(d_mul_identity(&a, &b, 0.0).is_err());
    }
}
