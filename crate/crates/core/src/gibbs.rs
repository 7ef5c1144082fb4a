//! Gibbs thermodynamics of a Hamiltonian spectrum: inverse temperature,
//! partition function and maximal entropy at a given mean energy.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operator::DensityMatrix;
use crate::spectrum::{HamiltonianSpectrum, Partition};

const BISECTION_STEPS: usize = 200;
const BRACKET_STEPS: usize = 1100;
/// Largest probability mass a Gibbs state may lose to the requested dimension.
pub const STATE_TAIL_TOL: f64 = 1e-10;

/// Gibbs state data at mean energy `E`: `β`, `Z = Tr e^{−βH}`,
/// `F = βE + ln Z`, and the truncation mass of the partition sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsSolution {
    #[serde(rename = "E")]
    pub energy: f64,
    pub beta: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub ln_z: f64,
    #[serde(rename = "F")]
    pub entropy: f64,
    pub tail_mass: f64,
}

/// Root of `mean(β) = E` for a strictly decreasing mean.
fn solve_decreasing(energy: f64, mean_at: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let above = |beta: f64| -> Result<bool> { Ok(mean_at(beta)? > energy) };
    let (mut lo, mut hi) = (1.0, 1.0);
    if above(1.0)? {
        let mut steps = 0;
        while above(hi)? {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > BRACKET_STEPS {
                return Err(invalid(
                    "energy",
                    format!("no inverse temperature reaches mean energy {energy}"),
                ));
            }
        }
    } else {
        let mut steps = 0;
        while !above(lo)? {
            hi = lo;
            lo *= 0.5;
            steps += 1;
            if steps > BRACKET_STEPS {
                return Err(invalid(
                    "energy",
                    format!("no inverse temperature reaches mean energy {energy}"),
                ));
            }
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_range(spec: &HamiltonianSpectrum, energy: f64) -> Result<()> {
    let h1 = spec.ground();
    let max = spec.max_gibbs_energy().unwrap_or(f64::INFINITY);
    if !(energy > h1) || !(energy < max) {
        return Err(Error::EnergyOutOfRange { energy, min: h1, max });
    }
    Ok(())
}

fn solution(spec: &HamiltonianSpectrum, energy: f64, beta: f64, part: Partition) -> Result<GibbsSolution> {
    let tol = 1e-10 * energy.abs().max(1.0);
    if (part.mean - energy).abs() > tol {
        return Err(Error::Precondition(format!(
            "mean-energy residual {:.3e} above tolerance {tol:.1e}",
            part.mean - energy
        )));
    }
    let h1 = spec.ground();
    let ln_z = part.ln_z_shifted - beta * h1;
    Ok(GibbsSolution {
        energy,
        beta,
        z: ln_z.exp(),
        ln_z,
        entropy: beta * (energy - h1) + part.ln_z_shifted,
        tail_mass: part.tail_mass,
    })
}

/// Inverse temperature of the Gibbs state with mean energy `E`, for
/// `h₁ < E` below the `β → 0` limit of the mean.
pub fn solve_beta(spec: &HamiltonianSpectrum, energy: f64) -> Result<GibbsSolution> {
    check_range(spec, energy)?;
    let beta = solve_decreasing(energy, |b| Ok(spec.partition(b)?.mean))?;
    solution(spec, energy, beta, spec.partition(beta)?)
}

/// `F_H(E)`: the maximal entropy of states with mean energy at most `E`.
pub fn f_of_e(spec: &HamiltonianSpectrum, energy: f64) -> Result<f64> {
    let h1 = spec.ground();
    if energy.is_nan() || energy < h1 {
        return Err(Error::EnergyOutOfRange {
            energy,
            min: h1,
            max: spec.max_gibbs_energy().unwrap_or(f64::INFINITY),
        });
    }
    if energy == h1 {
        return Ok((spec.ground_multiplicity() as f64).ln());
    }
    if let (Some(max), Some(n)) = (spec.max_gibbs_energy(), spec.len()) {
        if energy >= max {
            return Ok((n as f64).ln());
        }
    }
    Ok(solve_beta(spec, energy)?.entropy)
}

/// `F_H(E)` with arguments below the ground level mapped to `F_H(h₁)`; used
/// where roundoff can push a formally admissible argument just under `h₁`.
pub fn f_of_e_clamped(spec: &HamiltonianSpectrum, energy: f64) -> Result<f64> {
    f_of_e(spec, energy.max(spec.ground()))
}

/// `Z_H(E) = Tr e^{−β_H(E) H}`; at `E = h₁` the limit is the ground
/// multiplicity when `h₁ = 0`.
pub fn z_of_e(spec: &HamiltonianSpectrum, energy: f64) -> Result<f64> {
    let h1 = spec.ground();
    if energy <= h1 {
        if energy < h1 || h1 != 0.0 {
            return Err(Error::EnergyOutOfRange {
                energy,
                min: h1,
                max: spec.max_gibbs_energy().unwrap_or(f64::INFINITY),
            });
        }
        return Ok(spec.ground_multiplicity() as f64);
    }
    if let (Some(max), Some(n)) = (spec.max_gibbs_energy(), spec.len()) {
        if energy >= max && h1 == 0.0 {
            return Ok(n as f64);
        }
    }
    Ok(solve_beta(spec, energy)?.z)
}

/// `H_m`, `H⁰_m` and the threshold `a(E) = 1 − 1/Z_{H⁰_m}(E)`.
#[derive(Clone, Debug)]
pub struct TruncatedHamiltonian {
    pub m: usize,
    pub h_m: HamiltonianSpectrum,
    pub h0_m: HamiltonianSpectrum,
}

impl TruncatedHamiltonian {
    pub fn threshold(&self, energy: f64) -> Result<f64> {
        Ok(1.0 - 1.0 / z_of_e(&self.h0_m, energy)?)
    }
}

pub fn truncate_hamiltonian(spec: &HamiltonianSpectrum, m: usize) -> Result<TruncatedHamiltonian> {
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    let h_m = spec.drop_lowest(m)?;
    let h0_m = h_m.with_zero_ground();
    Ok(TruncatedHamiltonian { m, h_m, h0_m })
}

/// Diagonal Gibbs state `γ_H(E)` on the first `dim` levels.
pub fn gibbs_state(spec: &HamiltonianSpectrum, energy: f64, dim: usize) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(invalid("dim", "must be positive"));
    }
    let levels = spec.levels(dim)?;
    let h1 = spec.ground();
    if energy == h1 {
        let mult = spec.ground_multiplicity();
        if mult > dim {
            return Err(Error::Truncation {
                levels: dim,
                tail_mass: 1.0 - dim as f64 / mult as f64,
            });
        }
        let probs: Vec<f64> = levels
            .iter()
            .map(|&x| if x - h1 <= 1e-14 { 1.0 / mult as f64 } else { 0.0 })
            .collect();
        return DensityMatrix::diagonal(&probs);
    }
    let sol = solve_beta(spec, energy)?;
    let (weights, lost) = spec.gibbs_weights(sol.beta, dim)?;
    if lost > STATE_TAIL_TOL {
        return Err(Error::Truncation {
            levels: dim,
            tail_mass: lost,
        });
    }
    let total: f64 = weights.iter().sum();
    DensityMatrix::diagonal(&weights.iter().map(|w| w / total).collect::<Vec<_>>())
}

/// `F_{H_1 ⊗ I + … + I ⊗ H_n}(E)`: the maximal entropy of a composite system
/// with additive Hamiltonian. Identical parts use `n·F(E/n)`; otherwise the
/// parts share one inverse temperature, which is the stationarity condition
/// of the concave allocation problem.
pub fn f_composite(specs: &[HamiltonianSpectrum], energy: f64) -> Result<f64> {
    let first = specs.first().ok_or_else(|| invalid("specs", "empty sequence"))?;
    if specs.iter().any(|s| !s.is_grounded()) {
        return Err(invalid("specs", "every part must be grounded"));
    }
    if energy < 0.0 {
        return Err(Error::EnergyOutOfRange {
            energy,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let n = specs.len();
    if specs.iter().all(|s| s == first) {
        return Ok(n as f64 * f_of_e(first, energy / n as f64)?);
    }
    if energy == 0.0 {
        return Ok(specs.iter().map(|s| (s.ground_multiplicity() as f64).ln()).sum());
    }
    let max: f64 = specs
        .iter()
        .map(|s| s.max_gibbs_energy().unwrap_or(f64::INFINITY))
        .sum();
    if energy >= max {
        return Ok(specs.iter().map(|s| (s.len().unwrap() as f64).ln()).sum());
    }
    let mean_at = |b: f64| -> Result<f64> { specs.iter().map(|s| Ok(s.partition(b)?.mean)).sum() };
    let beta = solve_decreasing(energy, mean_at)?;
    let mut total = 0.0;
    for s in specs {
        let p = s.partition(beta)?;
        total += beta * p.mean + p.ln_z_shifted;
    }
    Ok(total)
}

/// `F_H(E)` for an explicit allocation `E = Σ E_k`; the value of the
/// allocation problem that [`f_composite`] maximizes.
pub fn f_allocation(specs: &[HamiltonianSpectrum], energies: &[f64]) -> Result<f64> {
    if specs.len() != energies.len() {
        return Err(Error::DimensionMismatch(specs.len(), energies.len()));
    }
    specs.iter().zip(energies).map(|(s, &e)| f_of_e(s, e)).sum()
}
