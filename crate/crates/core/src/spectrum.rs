//! Hamiltonian spectra and their partition sums.
//!
//! A spectrum is a finite list of leading levels optionally followed by an
//! infinite tail `(start + step·j)^power`, `j = 0, 1, …`. Tails with unit power
//! are geometric under the Gibbs weights and summed in closed form; other
//! powers are summed over a truncation of `256` levels that doubles up to
//! `4096` until the neglected mass is below [`TAIL_TOL`].

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest tolerated relative mass beyond a numerical truncation.
pub const TAIL_TOL: f64 = 1e-13;
pub const DEFAULT_TRUNCATION: usize = 256;
pub const MAX_TRUNCATION: usize = 4096;
const LEVEL_TIE: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Tail {
    start: f64,
    step: f64,
    power: f64,
}

impl Tail {
    fn level(&self, j: usize) -> f64 {
        let base = self.start + self.step * j as f64;
        if self.power == 1.0 {
            base
        } else {
            base.powf(self.power)
        }
    }
}

/// Nondecreasing eigenvalues `h₁ ≤ h₂ ≤ …` of a positive Hamiltonian given in
/// its own eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpectrum {
    head: Vec<f64>,
    tail: Option<Tail>,
}

/// Shifted partition data at inverse temperature `β`: `ln Σ e^{−β(h_k − h₁)}`,
/// the Gibbs mean energy, and the relative weight left out by truncation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Partition {
    pub ln_z_shifted: f64,
    pub mean: f64,
    pub tail_mass: f64,
}

/// Serialized form of a spectrum in configuration and spectrum files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpectrumSpec {
    /// `h_k = k − 1`.
    Oscillator,
    /// `h_k = c(k − 1)`.
    Linear { c: f64 },
    /// A finite nondecreasing list.
    Explicit { levels: Vec<f64> },
}

impl SpectrumSpec {
    pub fn build(&self) -> Result<HamiltonianSpectrum> {
        match self {
            SpectrumSpec::Oscillator => Ok(HamiltonianSpectrum::oscillator()),
            SpectrumSpec::Linear { c } => HamiltonianSpectrum::linear(*c),
            SpectrumSpec::Explicit { levels } => HamiltonianSpectrum::explicit(levels.clone()),
        }
    }
}

impl HamiltonianSpectrum {
    pub fn oscillator() -> Self {
        Self {
            head: Vec::new(),
            tail: Some(Tail {
                start: 0.0,
                step: 1.0,
                power: 1.0,
            }),
        }
    }

    pub fn linear(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(invalid(
                "c",
                format!("linear spectrum needs a positive finite spacing, got {c}"),
            ));
        }
        Ok(Self {
            head: Vec::new(),
            tail: Some(Tail {
                start: 0.0,
                step: c,
                power: 1.0,
            }),
        })
    }

    /// Finite spectrum; the list must already be sorted nondecreasing with
    /// `h₁ ≥ 0`.
    pub fn explicit(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(invalid("levels", "empty spectrum"));
        }
        if levels.iter().any(|x| !x.is_finite()) {
            return Err(invalid("levels", "non-finite level"));
        }
        if levels[0] < 0.0 {
            return Err(invalid("levels", format!("lowest level {} is negative", levels[0])));
        }
        if let Some(i) = levels.windows(2).position(|w| w[1] < w[0]) {
            return Err(invalid("levels", format!("not sorted at index {}", i + 1)));
        }
        Ok(Self {
            head: levels,
            tail: None,
        })
    }

    /// Explicit leading levels followed by the tail `start + step·j`.
    pub fn with_linear_tail(head: Vec<f64>, start: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(invalid("step", "tail spacing must be positive"));
        }
        let mut all = head.clone();
        all.push(start);
        Self::explicit(all)?;
        Ok(Self {
            head,
            tail: Some(Tail {
                start,
                step,
                power: 1.0,
            }),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
    }

    /// Number of levels, `None` for an infinite spectrum.
    pub fn len(&self) -> Option<usize> {
        self.tail.is_none().then_some(self.head.len())
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty() && self.tail.is_none()
    }

    pub fn level(&self, k: usize) -> Option<f64> {
        if k < self.head.len() {
            Some(self.head[k])
        } else {
            self.tail.as_ref().map(|t| t.level(k - self.head.len()))
        }
    }

    pub fn ground(&self) -> f64 {
        self.level(0).expect("nonempty spectrum")
    }

    pub fn is_grounded(&self) -> bool {
        self.ground() == 0.0
    }

    /// First `n` levels.
    pub fn levels(&self, n: usize) -> Result<Vec<f64>> {
        if let Some(len) = self.len() {
            if n > len {
                return Err(Error::DimensionMismatch(n, len));
            }
        }
        Ok((0..n).map(|k| self.level(k).expect("checked length")).collect())
    }

    pub fn ground_multiplicity(&self) -> usize {
        let h1 = self.ground();
        let mut k = 0;
        while let Some(x) = self.level(k) {
            if x - h1 > LEVEL_TIE {
                break;
            }
            k += 1;
        }
        k
    }

    /// `H_m`: the spectrum with the lowest `m` levels removed.
    pub fn drop_lowest(&self, m: usize) -> Result<Self> {
        if let Some(len) = self.len() {
            if m >= len {
                return Err(invalid("m", format!("cannot drop {m} of {len} levels")));
            }
        }
        if m <= self.head.len() {
            return Ok(Self {
                head: self.head[m..].to_vec(),
                tail: self.tail.clone(),
            });
        }
        let t = self.tail.as_ref().expect("infinite spectrum");
        let shift = (m - self.head.len()) as f64;
        Ok(Self {
            head: Vec::new(),
            tail: Some(Tail {
                start: t.start + t.step * shift,
                ..t.clone()
            }),
        })
    }

    /// The same spectrum with an extra level `0` below everything else.
    pub fn with_zero_ground(&self) -> Self {
        let mut head = Vec::with_capacity(self.head.len() + 1);
        head.push(0.0);
        head.extend_from_slice(&self.head);
        Self {
            head,
            tail: self.tail.clone(),
        }
    }

    /// Spectrum of `H^a` for `a ≥ 1`.
    pub fn power(&self, a: f64) -> Result<Self> {
        if !(a >= 1.0) || !a.is_finite() {
            return Err(invalid("a", format!("power must be a finite number ≥ 1, got {a}")));
        }
        Ok(Self {
            head: self.head.iter().map(|x| x.powf(a)).collect(),
            tail: self.tail.as_ref().map(|t| Tail {
                power: t.power * a,
                ..t.clone()
            }),
        })
    }

    /// Spectrum of `cH` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(invalid("c", format!("scale must be positive, got {c}")));
        }
        let tail = match &self.tail {
            None => None,
            Some(t) if t.power == 1.0 => Some(Tail {
                start: t.start * c,
                step: t.step * c,
                power: 1.0,
            }),
            Some(_) => return Err(invalid("c", "scaling a powered tail is not supported")),
        };
        Ok(Self {
            head: self.head.iter().map(|x| x * c).collect(),
            tail,
        })
    }

    /// Gibbs mean energy at `β = 0` for a finite spectrum, the supremum of the
    /// energies reachable with `β > 0`.
    pub fn max_gibbs_energy(&self) -> Option<f64> {
        self.len().map(|n| self.head.iter().sum::<f64>() / n as f64)
    }

    pub fn partition(&self, beta: f64) -> Result<Partition> {
        if !(beta > 0.0) || !beta.is_finite() {
            if beta == 0.0 && self.is_finite() {
                let n = self.head.len() as f64;
                return Ok(Partition {
                    ln_z_shifted: n.ln(),
                    mean: self.max_gibbs_energy().unwrap(),
                    tail_mass: 0.0,
                });
            }
            return Err(invalid("beta", format!("{beta} must be positive and finite")));
        }
        let h1 = self.ground();
        let mut z = 0.0;
        let mut e = 0.0;
        for &x in &self.head {
            let w = (-beta * (x - h1)).exp();
            z += w;
            e += x * w;
        }
        let tail_mass = match &self.tail {
            None => 0.0,
            Some(t) if t.power == 1.0 => {
                let lead = (-beta * (t.start - h1)).exp();
                let one_minus_q = -(-beta * t.step).exp_m1();
                let q = 1.0 - one_minus_q;
                z += lead / one_minus_q;
                e += lead * (t.start / one_minus_q + t.step * q / (one_minus_q * one_minus_q));
                0.0
            }
            Some(t) => self.powered_tail(t, beta, h1, &mut z, &mut e)?,
        };
        Ok(Partition {
            ln_z_shifted: z.ln(),
            mean: e / z,
            tail_mass,
        })
    }

    fn powered_tail(&self, t: &Tail, beta: f64, h1: f64, z: &mut f64, e: &mut f64) -> Result<f64> {
        let head_z = *z;
        let head_e = *e;
        let mut total = DEFAULT_TRUNCATION.max(self.head.len() + 2);
        loop {
            let count = total - self.head.len();
            let mut tz = 0.0;
            let mut te = 0.0;
            for j in 0..count {
                let x = t.level(j);
                let w = (-beta * (x - h1)).exp();
                tz += w;
                te += x * w;
            }
            let next = t.level(count);
            let gap = next - t.level(count - 1);
            let remainder = (-beta * (next - h1)).exp() / -(-beta * gap).exp_m1();
            let zz = head_z + tz;
            let mass = remainder / zz;
            if mass <= TAIL_TOL {
                *z = zz;
                *e = head_e + te;
                return Ok(mass);
            }
            if total >= MAX_TRUNCATION {
                return Err(Error::Truncation {
                    levels: total,
                    tail_mass: mass,
                });
            }
            total = (total * 2).min(MAX_TRUNCATION);
        }
    }

    /// `(h_k, p_k)` for the first `n` Gibbs weights at `β`, with the mass
    /// beyond level `n`.
    pub fn gibbs_weights(&self, beta: f64, n: usize) -> Result<(Vec<f64>, f64)> {
        let part = self.partition(beta)?;
        let levels = self.levels(n)?;
        let h1 = self.ground();
        let ln_z = part.ln_z_shifted;
        let weights: Vec<f64> = levels.iter().map(|&x| (-beta * (x - h1) - ln_z).exp()).collect();
        let kept: f64 = weights.iter().sum();
        Ok((weights, (1.0 - kept).max(0.0) + part.tail_mass))
    }
}
