//! Entanglement of formation: the closed form for two qubits and a numerical
//! convex-roof optimizer for small bipartite systems.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::operator::{spectral_decompose, CMatrix, CVector, DensityMatrix, HermitianMatrix, PositiveOperator};
use crate::scalar::{eta, h};
use crate::stategen::{haar_unitary, sample_rng};

const WEIGHT_TOL: f64 = 1e-14;
const MAX_ITERATIONS: usize = 2000;
const STALL_ITERATIONS: usize = 25;
const STATIONARITY_TOL: f64 = 1e-7;
const ARMIJO: f64 = 1e-4;

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` of a two-qubit state,
/// with `λ_i` the singular values of `√ρ √ρ̃` and `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(invalid(
            "rho",
            format!("concurrence needs a two-qubit state, got dimension {}", rho.dim()),
        ));
    }
    let mut flip = CMatrix::zeros(4, 4);
    for (i, j, s) in [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)] {
        flip[(i, j)] = Complex64::new(s, 0.0);
    }
    let sqrt_rho = rho.hermitian().spectral().map(|x| x.max(0.0).sqrt());
    let sqrt_tilde = &flip * sqrt_rho.conjugate() * &flip;
    let mut l: Vec<f64> = (&sqrt_rho * sqrt_tilde).singular_values().iter().copied().collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// `E_F = h((1 + √(1 − C²))/2)` for two qubits.
pub fn wootters_eof(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?.min(1.0);
    Ok(h(0.5 * (1.0 + (1.0 - c * c).sqrt())))
}

/// Pure-state decomposition `ρ = Σ_k p_k |ψ_k⟩⟨ψ_k|`.
#[derive(Clone, Debug, Serialize)]
pub struct PureEnsemble {
    pub weights: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<CVector>,
}

impl PureEnsemble {
    /// Ensemble of `p·self ⊕ (1 − p)·other`, a decomposition of the mixture
    /// of the two averages.
    pub fn concat(&self, other: &PureEnsemble, p: f64) -> Result<PureEnsemble> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid("p", format!("{p} not in [0, 1]")));
        }
        let weights = self
            .weights
            .iter()
            .map(|w| p * w)
            .chain(other.weights.iter().map(|w| (1.0 - p) * w))
            .collect();
        let vectors = self.vectors.iter().chain(&other.vectors).cloned().collect();
        Ok(PureEnsemble { weights, vectors })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn average(&self) -> CMatrix {
        let n = self.vectors.first().map_or(0, |v| v.len());
        let mut m = CMatrix::zeros(n, n);
        for (w, v) in self.weights.iter().zip(&self.vectors) {
            m += v * v.adjoint() * Complex64::new(*w, 0.0);
        }
        m
    }

    /// `Σ_k p_k S(Tr_B |ψ_k⟩⟨ψ_k|)`.
    pub fn average_entanglement(&self, dims: (usize, usize)) -> f64 {
        self.weights
            .iter()
            .zip(&self.vectors)
            .map(|(w, v)| w * reduced_entropy(&reshape(v, dims)))
            .sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoofResult {
    pub value: f64,
    pub ensemble: PureEnsemble,
    pub restarts: usize,
    pub best_restart: usize,
    /// Final value of every restart, in restart order.
    pub restart_values: Vec<f64>,
    /// Norm of the Riemannian gradient at the returned point.
    pub stationarity: f64,
    pub converged: bool,
}

fn reshape(psi: &CVector, dims: (usize, usize)) -> CMatrix {
    CMatrix::from_fn(dims.0, dims.1, |i, j| psi[i * dims.1 + j])
}

fn reduced_entropy(m: &CMatrix) -> f64 {
    let x = HermitianMatrix::symmetrized(m * m.adjoint());
    let total = x.trace();
    if total <= WEIGHT_TOL {
        return 0.0;
    }
    x.eigenvalues().iter().map(|&l| eta(l.max(0.0) / total)).sum()
}

/// Objective `Σ_k S̃(M_k M_k†)` over the columns of `Ψ` and, optionally, the
/// gradient `∂/∂Ψ̄`.
fn objective(psi: &CMatrix, dims: (usize, usize), want_grad: bool) -> (f64, CMatrix) {
    let mut total = 0.0;
    let mut grad = if want_grad {
        CMatrix::zeros(psi.nrows(), psi.ncols())
    } else {
        CMatrix::zeros(0, 0)
    };
    for k in 0..psi.ncols() {
        let col: CVector = psi.column(k).into_owned();
        let m = reshape(&col, dims);
        let x = HermitianMatrix::symmetrized(&m * m.adjoint());
        let p = x.trace();
        if p <= WEIGHT_TOL {
            continue;
        }
        let s = x.spectral();
        total += s.values.iter().map(|&l| eta(l.max(0.0))).sum::<f64>() - eta(p);
        if want_grad {
            let log = s.map(|l| if l > WEIGHT_TOL * p { l.ln() } else { 0.0 });
            let g = (&m * Complex64::new(p.ln(), 0.0)) - log * &m;
            for i in 0..dims.0 {
                for j in 0..dims.1 {
                    grad[(i * dims.1 + j, k)] = g[(i, j)];
                }
            }
        }
    }
    (total, grad)
}

struct Problem {
    dims: (usize, usize),
    /// Columns `√λ_i e_i` of the support of `ρ`.
    factor: CMatrix,
    size: usize,
}

impl Problem {
    fn psi(&self, w: &CMatrix) -> CMatrix {
        let r = self.factor.ncols();
        &self.factor * w.columns(0, r).transpose()
    }

    fn value(&self, w: &CMatrix) -> f64 {
        objective(&self.psi(w), self.dims, false).0
    }

    /// Value and skew-Hermitian descent generator `Ω = Y − Y†`, `Y = W†Γ`.
    fn value_and_direction(&self, w: &CMatrix) -> (f64, CMatrix) {
        let (value, grad) = objective(&self.psi(w), self.dims, true);
        let r = self.factor.ncols();
        let gamma_r = (self.factor.adjoint() * grad).transpose();
        let mut gamma = CMatrix::zeros(self.size, self.size);
        gamma.columns_mut(0, r).copy_from(&gamma_r);
        let y = w.adjoint() * gamma;
        let omega = &y - y.adjoint();
        (value, omega)
    }

    fn ensemble(&self, w: &CMatrix) -> PureEnsemble {
        let psi = self.psi(w);
        let mut weights = Vec::new();
        let mut vectors = Vec::new();
        for k in 0..psi.ncols() {
            let col: CVector = psi.column(k).into_owned();
            let p = col.norm_squared();
            if p > WEIGHT_TOL {
                weights.push(p);
                vectors.push(col / Complex64::new(p.sqrt(), 0.0));
            }
        }
        PureEnsemble { weights, vectors }
    }
}

/// `W exp(−tΩ)` through the eigendecomposition of the Hermitian `iΩ`.
struct Geodesic {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl Geodesic {
    fn new(omega: &CMatrix) -> Self {
        let herm = HermitianMatrix::symmetrized(omega * Complex64::new(0.0, 1.0));
        let s = spectral_decompose(&herm);
        Self {
            values: s.values,
            vectors: s.vectors,
        }
    }

    fn step(&self, w: &CMatrix, t: f64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &mu) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, t * mu);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= phase;
            }
        }
        w * (scaled * self.vectors.adjoint())
    }
}

fn descend(problem: &Problem, mut w: CMatrix) -> (f64, f64, CMatrix) {
    let (mut value, mut omega) = problem.value_and_direction(&w);
    let mut t: f64 = 1.0;
    let mut stalled = 0;
    for _ in 0..MAX_ITERATIONS {
        let norm2 = omega.norm_squared();
        if norm2.sqrt() < 1e-12 {
            break;
        }
        let geo = Geodesic::new(&omega);
        t = (t * 2.0).min(1e3);
        let mut accepted = None;
        for _ in 0..60 {
            let candidate = geo.step(&w, t);
            let v = problem.value(&candidate);
            if v <= value - ARMIJO * t * norm2 {
                accepted = Some((candidate, v));
                break;
            }
            t *= 0.5;
        }
        let Some((next, v)) = accepted else { break };
        if value - v < 1e-15 * value.abs().max(1.0) {
            stalled += 1;
            if stalled >= STALL_ITERATIONS {
                w = next;
                break;
            }
        } else {
            stalled = 0;
        }
        w = next;
        let (nv, no) = problem.value_and_direction(&w);
        value = nv;
        omega = no;
    }
    let (value, omega) = problem.value_and_direction(&w);
    (value, omega.norm(), w)
}

/// Entanglement of formation of `ρ` on `A ⊗ B` by minimizing
/// `Σ_k p_k S((ψ_k)_A)` over ensembles of `K ≥ rank ρ` pure states.
///
/// Ensembles are parametrized by `K × K` unitaries `W` through
/// `ψ̃_k = Σ_i W_{ki} √λ_i e_i`. Each restart starts from a Haar-random `W`
/// and runs Riemannian gradient descent with Armijo backtracking on the
/// unitary group; the best restart is returned. The value is an upper
/// estimate of `E_F(ρ)` that is exact at a global minimum.
pub fn convex_roof_eof(
    rho: &DensityMatrix,
    dims: (usize, usize),
    ensemble_size: usize,
    restarts: usize,
    seed: u64,
) -> Result<RoofResult> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::Factorization {
            total: rho.dim(),
            dim_a: da,
            dim_b: db,
        });
    }
    if restarts == 0 {
        return Err(invalid("restarts", "must be positive"));
    }
    let s = rho.hermitian().spectral();
    let support: Vec<usize> = (0..s.dim()).filter(|&i| s.values[i] > WEIGHT_TOL).collect();
    let r = support.len();
    if ensemble_size < r {
        return Err(invalid(
            "ensemble_size",
            format!("{ensemble_size} is below rank ρ = {r}"),
        ));
    }
    let factor = CMatrix::from_fn(rho.dim(), r, |i, j| {
        s.vectors[(i, support[j])] * Complex64::new(s.values[support[j]].sqrt(), 0.0)
    });
    let problem = Problem {
        dims,
        factor,
        size: ensemble_size,
    };

    let runs = crate::par::map(restarts, None, |restart| {
        let mut rng = sample_rng(seed, restart as u64);
        descend(&problem, haar_unitary(ensemble_size, &mut rng))
    })?;
    let restart_values: Vec<f64> = runs.iter().map(|r| r.0.max(0.0)).collect();
    let best_restart = (0..restarts)
        .min_by(|&i, &j| runs[i].0.total_cmp(&runs[j].0))
        .expect("at least one restart");
    let (value, stationarity, w) = runs.into_iter().nth(best_restart).expect("index in range");
    Ok(RoofResult {
        value: value.max(0.0),
        ensemble: problem.ensemble(&w),
        restarts,
        best_restart,
        restart_values,
        stationarity,
        converged: stationarity < STATIONARITY_TOL,
    })
}
