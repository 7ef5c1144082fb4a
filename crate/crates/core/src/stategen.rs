//! Seeded generation of states and state pairs that satisfy the hypotheses of
//! each bound by construction.
//!
//! Every generator draws from a [`ChaCha8Rng`] selected by `(seed, stream)`,
//! so a campaign can hand sample `i` the stream `i` and obtain the same input
//! regardless of how samples are distributed over workers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::entropy::shannon;
use crate::error::{invalid, Error, Result};
use crate::operator::{trace_distance, CMatrix, DensityMatrix, HermitianMatrix, PositiveOperator, SubHermitian};
use crate::spectrum::{HamiltonianSpectrum, SpectrumSpec};

pub type SampleRng = ChaCha8Rng;

pub fn sample_rng(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Generic,
    CommutingPair,
    QcPair,
    EnergyConstrained,
    MajorizedPair,
    ExtremalEnergyPair,
}

impl SampleKind {
    pub fn name(self) -> &'static str {
        match self {
            SampleKind::Generic => "generic",
            SampleKind::CommutingPair => "commuting_pair",
            SampleKind::QcPair => "qc_pair",
            SampleKind::EnergyConstrained => "energy_constrained",
            SampleKind::MajorizedPair => "majorized_pair",
            SampleKind::ExtremalEnergyPair => "extremal_energy_pair",
        }
    }
}

/// Description of one family of random inputs.
///
/// `dims` is `[d]` for single systems and `[d_A, d_B]` for bipartite ones
/// (for q-c pairs `d_B` is the number of classical blocks).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub kind: SampleKind,
    pub dims: Vec<usize>,
    #[serde(default = "default_epsilon")]
    pub target_epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Moment order of the energy constraint `Tr H^a ρ ≤ E`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Domination or scaling constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_epsilon() -> f64 {
    0.1
}

impl SampleSpec {
    pub fn new(kind: SampleKind, dims: Vec<usize>) -> Self {
        Self {
            kind,
            dims,
            target_epsilon: default_epsilon(),
            m: None,
            spectrum: None,
            energy: None,
            k: None,
            a: None,
            c: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_epsilon(self.target_epsilon)?;
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(invalid(
                "dims",
                format!("every dimension must be at least 2, got {:?}", self.dims),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn bipartite(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(invalid("dims", format!("expected two factors, got {:?}", self.dims))),
        }
    }

    pub fn build_spectrum(&self) -> Result<HamiltonianSpectrum> {
        self.spectrum.clone().unwrap_or(SpectrumSpec::Oscillator).build()
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("target_epsilon", format!("{eps} not in (0, 1]")));
    }
    Ok(())
}

fn gaussian(rng: &mut SampleRng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut SampleRng) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix with the
/// phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary(dim: usize, rng: &mut SampleRng) -> CMatrix {
    let qr = ginibre(dim, dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniform point of the probability simplex restricted to `support` entries
/// (chosen uniformly at random among `len`).
pub fn random_probability(len: usize, support: usize, rng: &mut SampleRng) -> Vec<f64> {
    let support = support.clamp(1, len);
    let mut idx: Vec<usize> = (0..len).collect();
    for i in 0..support {
        let j = rng.random_range(i..len);
        idx.swap(i, j);
    }
    let mut p = vec![0.0; len];
    let mut total = 0.0;
    for &i in &idx[..support] {
        let x: f64 = Exp1.sample(rng);
        p[i] = x;
        total += x;
    }
    p.iter_mut().for_each(|x| *x /= total);
    p
}

/// `G G†/Tr(G G†)` with `G` a `dim × rank` complex Gaussian matrix.
pub fn random_density_with(dim: usize, rank: usize, rng: &mut SampleRng) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(invalid("rank", format!("{rank} not in [1, {dim}]")));
    }
    let g = ginibre(dim, rank, rng);
    DensityMatrix::normalized(&g * g.adjoint())
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(dim, rank, &mut sample_rng(seed, 0))
}

/// Random state whose rank is itself uniform on `1..=dim`.
pub fn random_state(dim: usize, rng: &mut SampleRng) -> Result<DensityMatrix> {
    let rank = rng.random_range(1..=dim);
    random_density_with(dim, rank, rng)
}

/// Probability vectors `p`, `q` with `TV(p, q) = ε` exactly:
/// `p = (1 − ε)w + ε t₊`, `q = (1 − ε)w + ε t₋` with `t₊ ⟂ t₋`.
pub fn commuting_distributions(dim: usize, eps: f64, rng: &mut SampleRng) -> Result<(Vec<f64>, Vec<f64>)> {
    check_epsilon(eps)?;
    if dim < 2 {
        return Err(invalid("dim", "need at least two levels"));
    }
    let w = random_probability(dim, rng.random_range(1..=dim), rng);
    let split = rng.random_range(1..dim);
    let mut order: Vec<usize> = (0..dim).collect();
    for i in 0..dim {
        let j = rng.random_range(i..dim);
        order.swap(i, j);
    }
    let (plus_idx, minus_idx) = order.split_at(split);
    let tp = random_probability(plus_idx.len(), rng.random_range(1..=plus_idx.len()), rng);
    let tm = random_probability(minus_idx.len(), rng.random_range(1..=minus_idx.len()), rng);
    let mut p: Vec<f64> = w.iter().map(|x| (1.0 - eps) * x).collect();
    let mut q = p.clone();
    for (&i, &x) in plus_idx.iter().zip(&tp) {
        p[i] += eps * x;
    }
    for (&i, &x) in minus_idx.iter().zip(&tm) {
        q[i] += eps * x;
    }
    Ok((p, q))
}

/// Commuting pair in a shared Haar-random eigenbasis with trace distance
/// exactly `ε`.
pub fn commuting_pair_with(dim: usize, eps: f64, rng: &mut SampleRng) -> Result<(DensityMatrix, DensityMatrix)> {
    let (p, q) = commuting_distributions(dim, eps, rng)?;
    let u = haar_unitary(dim, rng);
    let tag = rng.random::<u64>();
    Ok((
        DensityMatrix::from_eigen(&p, &u)?.with_basis_tag(tag),
        DensityMatrix::from_eigen(&q, &u)?.with_basis_tag(tag),
    ))
}

pub fn commuting_pair(dim: usize, eps: f64, seed: u64) -> Result<(DensityMatrix, DensityMatrix)> {
    commuting_pair_with(dim, eps, &mut sample_rng(seed, 0))
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// `Σ_{i≤r} λ↓_i(σ) ≤ Σ_{i≤r} λ↓_i(ρ)` for every `r < m` (within `1e-12`).
pub fn partially_majorizes(rho: &[f64], sigma: &[f64], m: usize) -> bool {
    let r = sorted_desc(rho);
    let s = sorted_desc(sigma);
    let mut sr = 0.0;
    let mut ss = 0.0;
    for (i, x) in r.iter().take(m.saturating_sub(1)).enumerate() {
        sr += x;
        ss += s.get(i).copied().unwrap_or(0.0);
        if ss > sr + 1e-12 {
            return false;
        }
    }
    true
}

const MAX_ATTEMPTS: usize = 1000;

/// Commuting pair with trace distance `ε`, `rank ρ > m` and `σ` `m`-partially
/// majorized by `ρ`. Candidates failing the condition are first repaired by
/// exchanging the roles of the two states and otherwise redrawn.
pub fn partial_majorized_pair_with(
    dim: usize,
    m: usize,
    eps: f64,
    rng: &mut SampleRng,
) -> Result<(DensityMatrix, DensityMatrix)> {
    if m == 0 || m >= dim {
        return Err(invalid("m", format!("{m} not in [1, {dim})")));
    }
    for _ in 0..MAX_ATTEMPTS {
        let (p, q) = commuting_distributions(dim, eps, rng)?;
        let rank = |v: &[f64]| v.iter().filter(|&&x| x > 1e-12).count();
        let candidates = [(p.clone(), q.clone()), (q, p)];
        for (a, b) in candidates {
            if rank(&a) > m && partially_majorizes(&a, &b, m) {
                let u = haar_unitary(dim, rng);
                let tag = rng.random::<u64>();
                return Ok((
                    DensityMatrix::from_eigen(&a, &u)?.with_basis_tag(tag),
                    DensityMatrix::from_eigen(&b, &u)?.with_basis_tag(tag),
                ));
            }
        }
    }
    Err(Error::Generation(format!(
        "no {m}-partially majorized pair found in {MAX_ATTEMPTS} attempts"
    )))
}

pub fn partial_majorized_pair(dim: usize, m: usize, eps: f64, seed: u64) -> Result<(DensityMatrix, DensityMatrix)> {
    partial_majorized_pair_with(dim, m, eps, &mut sample_rng(seed, 0))
}

/// Quantum-classical state `Σ_k p_k ρ_k ⊗ |k⟩⟨k|` stored as its ensemble.
/// Blocks with `p_k = 0` carry the maximally mixed state.
#[derive(Clone, Debug)]
pub struct QcState {
    pub dim_a: usize,
    pub weights: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl QcState {
    pub fn new(weights: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::DimensionMismatch(weights.len(), states.len()));
        }
        let dim_a = states[0].dim();
        if states.iter().any(|s| s.dim() != dim_a) {
            return Err(invalid("states", "blocks have different dimensions"));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|&w| w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(invalid("weights", format!("not a probability vector (sum {total})")));
        }
        Ok(Self { dim_a, weights, states })
    }

    /// Builds the ensemble from unnormalized positive blocks `A_k = p_k ρ_k`.
    pub fn from_blocks(blocks: &[CMatrix]) -> Result<Self> {
        let dim_a = blocks
            .first()
            .map(|b| b.nrows())
            .ok_or_else(|| invalid("blocks", "empty"))?;
        let traces: Vec<f64> = blocks.iter().map(|b| b.trace().re.max(0.0)).collect();
        let total: f64 = traces.iter().sum();
        let mut weights = Vec::with_capacity(blocks.len());
        let mut states = Vec::with_capacity(blocks.len());
        for (b, &t) in blocks.iter().zip(&traces) {
            if t > 1e-15 {
                weights.push(t / total);
                states.push(DensityMatrix::normalized(b.clone())?);
            } else {
                weights.push(0.0);
                states.push(DensityMatrix::maximally_mixed(dim_a));
            }
        }
        let s: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= s);
        Self::new(weights, states)
    }

    pub fn blocks(&self) -> usize {
        self.weights.len()
    }

    /// `p_k ρ_k`.
    pub fn block(&self, k: usize) -> Result<SubHermitian> {
        SubHermitian::scaled_state(&self.states[k], self.weights[k])
    }

    pub fn marginal_a(&self) -> Result<DensityMatrix> {
        let mut m = CMatrix::zeros(self.dim_a, self.dim_a);
        for (w, s) in self.weights.iter().zip(&self.states) {
            m += s.matrix() * Complex64::new(*w, 0.0);
        }
        DensityMatrix::normalized(m)
    }

    /// Full state on `A ⊗ B` with basis index `i·blocks + k`.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let nb = self.blocks();
        let n = self.dim_a * nb;
        let mut m = CMatrix::zeros(n, n);
        for (k, (w, s)) in self.weights.iter().zip(&self.states).enumerate() {
            for i in 0..self.dim_a {
                for j in 0..self.dim_a {
                    m[(i * nb + k, j * nb + k)] = s.matrix()[(i, j)] * *w;
                }
            }
        }
        DensityMatrix::normalized(m)
    }

    /// `S(A|B) = Σ_k p_k S(ρ_k)`.
    pub fn conditional_entropy(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.states)
            .map(|(w, s)| if *w > 0.0 { w * shannon(&s.eigenvalues()) } else { 0.0 })
            .sum()
    }

    /// `½ Σ_k ‖p_k ρ_k − q_k σ_k‖₁`.
    pub fn distance(&self, other: &QcState) -> Result<f64> {
        if self.blocks() != other.blocks() || self.dim_a != other.dim_a {
            return Err(Error::DimensionMismatch(
                self.dim_a * self.blocks(),
                other.dim_a * other.blocks(),
            ));
        }
        let mut total = 0.0;
        for k in 0..self.blocks() {
            let a = self.states[k].matrix() * Complex64::new(self.weights[k], 0.0);
            let b = other.states[k].matrix() * Complex64::new(other.weights[k], 0.0);
            total += HermitianMatrix::new(a - b)?.trace_norm();
        }
        Ok((0.5 * total).min(1.0))
    }
}

fn random_positive_on(dim: usize, basis: &CMatrix, support: &[usize], rng: &mut SampleRng) -> CMatrix {
    let mut probs = vec![0.0; dim];
    let inner = random_probability(support.len(), rng.random_range(1..=support.len()), rng);
    for (&i, &x) in support.iter().zip(&inner) {
        probs[i] = x;
    }
    crate::operator::Spectral {
        values: probs,
        vectors: basis.clone(),
    }
    .reconstruct()
}

/// Pair of q-c states with `½ Σ_k ‖p_kρ_k − q_kσ_k‖₁ = ε`:
/// `A_k = (1 − ε)W_k + εT₊_k`, `B_k = (1 − ε)W_k + εT₋_k` where `T₊_k ⟂ T₋_k`
/// within every block. The `ρ`-side blocks may be confined to a random
/// subspace of `A` so that `rank ρ_A < d_A` occurs.
pub fn qc_pair_with(dim_a: usize, blocks: usize, eps: f64, rng: &mut SampleRng) -> Result<(QcState, QcState)> {
    check_epsilon(eps)?;
    if dim_a < 2 || blocks == 0 {
        return Err(invalid(
            "dims",
            format!("need d_A ≥ 2 and at least one block, got ({dim_a}, {blocks})"),
        ));
    }
    let rank_a = rng.random_range(1..=dim_a);
    let frame = haar_unitary(dim_a, rng);
    let confined: Vec<usize> = (0..rank_a).collect();
    let w_mass = random_probability(blocks, rng.random_range(1..=blocks), rng);
    let t_mass = random_probability(blocks, rng.random_range(1..=blocks), rng);
    let s_mass = random_probability(blocks, rng.random_range(1..=blocks), rng);
    let mut a_blocks = Vec::with_capacity(blocks);
    let mut b_blocks = Vec::with_capacity(blocks);
    for k in 0..blocks {
        let local = if rank_a == dim_a {
            haar_unitary(dim_a, rng)
        } else {
            frame.clone()
        };
        let w = random_positive_on(dim_a, &local, &confined, rng) * Complex64::new((1.0 - eps) * w_mass[k], 0.0);
        let (plus, minus) = if rank_a == dim_a {
            let split = rng.random_range(1..dim_a);
            ((0..split).collect::<Vec<_>>(), (split..dim_a).collect::<Vec<_>>())
        } else {
            (confined.clone(), (rank_a..dim_a).collect::<Vec<_>>())
        };
        let tp = random_positive_on(dim_a, &local, &plus, rng) * Complex64::new(eps * t_mass[k], 0.0);
        let tm = random_positive_on(dim_a, &local, &minus, rng) * Complex64::new(eps * s_mass[k], 0.0);
        a_blocks.push(&w + tp);
        b_blocks.push(w + tm);
    }
    Ok((QcState::from_blocks(&a_blocks)?, QcState::from_blocks(&b_blocks)?))
}

pub fn qc_pair(dim_a: usize, blocks: usize, eps: f64, seed: u64) -> Result<(QcState, QcState)> {
    qc_pair_with(dim_a, blocks, eps, &mut sample_rng(seed, 0))
}

/// Random state with `Tr Hρ ≤ E` (`H` diagonal in the computational basis),
/// obtained by mixing with the ground state. Returns the achieved energy.
/// With `saturate`, the mixture is chosen so that the energy equals `E`
/// whenever the unconstrained draw exceeds it.
pub fn energy_constrained_with(
    spec: &HamiltonianSpectrum,
    energy: f64,
    dim: usize,
    saturate: bool,
    rng: &mut SampleRng,
) -> Result<(DensityMatrix, f64)> {
    let levels = spec.levels(dim)?;
    let h1 = levels[0];
    if !(energy >= h1) {
        return Err(invalid("energy", format!("{energy} below the ground level {h1}")));
    }
    let rho = random_state(dim, rng)?;
    let diag = rho.hermitian().diagonal_in(None);
    let e_rho: f64 = levels.iter().zip(&diag).map(|(h, p)| h * p).sum();
    if e_rho <= energy || e_rho - h1 <= 0.0 {
        return Ok((rho, e_rho));
    }
    let t = if saturate {
        (e_rho - energy) / (e_rho - h1)
    } else {
        ((e_rho - energy) / (e_rho - h1) + rng.random::<f64>()).min(1.0)
    };
    let ground = DensityMatrix::basis_state(dim, 0)?;
    let mixed = ground.mix(&rho, t)?;
    let d2 = mixed.hermitian().diagonal_in(None);
    let achieved = levels.iter().zip(&d2).map(|(h, p)| h * p).sum();
    Ok((mixed, achieved))
}

pub fn energy_constrained(
    spec: &HamiltonianSpectrum,
    energy: f64,
    dim: usize,
    seed: u64,
) -> Result<(DensityMatrix, f64)> {
    energy_constrained_with(spec, energy, dim, false, &mut sample_rng(seed, 0))
}

/// `ρ_ε = |τ_k⟩⟨τ_k|`, `σ_ε = ε|τ₁⟩⟨τ₁| + (1 − ε)ρ_ε` on the first `max(k, 2)`
/// levels (`k` is 1-based). For `k = 1` the two states coincide.
pub fn extremal_energy_pair(spec: &HamiltonianSpectrum, k: usize, eps: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    check_epsilon(eps)?;
    if k == 0 {
        return Err(invalid("k", "levels are numbered from 1"));
    }
    if spec.len().is_some_and(|n| k > n) {
        return Err(invalid("k", format!("spectrum has fewer than {k} levels")));
    }
    let dim = k.max(2);
    let mut p = vec![0.0; dim];
    p[k - 1] = 1.0;
    let mut q = vec![0.0; dim];
    q[k - 1] += 1.0 - eps;
    q[0] += eps;
    Ok((DensityMatrix::diagonal(&p)?, DensityMatrix::diagonal(&q)?))
}

/// `σ = (1 − t)ρ + tτ` for a random `τ`, with `t` chosen so that the trace
/// distance equals `ε` when reachable and `t = 1` otherwise.
pub fn perturb_within(rho: &DensityMatrix, eps: f64, rng: &mut SampleRng) -> Result<DensityMatrix> {
    let dim = rho.dim();
    let rank = if rng.random::<f64>() < 0.5 {
        1
    } else {
        rng.random_range(1..=dim)
    };
    let tau = random_density_with(dim, rank, rng)?;
    let full = trace_distance(rho, &tau)?;
    let t = if full <= eps { 1.0 } else { eps / full };
    tau.mix(rho, t)
}

/// Generic (typically non-commuting) pair with `½‖ρ − σ‖₁ ≤ ε`.
pub fn generic_pair_with(dim: usize, eps: f64, rng: &mut SampleRng) -> Result<(DensityMatrix, DensityMatrix)> {
    check_epsilon(eps)?;
    let rho = random_state(dim, rng)?;
    let sigma = perturb_within(&rho, eps, rng)?;
    Ok((rho, sigma))
}

/// Commuting pair on `C^{d_A} ⊗ C^{d_B}` with trace distance exactly `ε`,
/// supported on `V ⊗ C^{d_B}` for a random subspace `V ⊆ C^{d_A}` of random
/// dimension, so that both `A` marginals have rank at most `dim V`.
pub fn commuting_bipartite_pair_with(
    dim_a: usize,
    dim_b: usize,
    eps: f64,
    rng: &mut SampleRng,
) -> Result<(DensityMatrix, DensityMatrix)> {
    check_epsilon(eps)?;
    let rank_a = rng.random_range(1..=dim_a);
    let inner = rank_a * dim_b;
    if inner < 2 {
        return commuting_pair_with(dim_a * dim_b, eps, rng);
    }
    let (p, q) = commuting_distributions(inner, eps, rng)?;
    let u = haar_unitary(inner, rng);
    let frame = haar_unitary(dim_a, rng);
    let iso = crate::operator::kron(&frame.columns(0, rank_a).into_owned(), &CMatrix::identity(dim_b, dim_b));
    let embed = |w: &[f64]| -> Result<DensityMatrix> {
        let small = crate::operator::Spectral {
            values: w.to_vec(),
            vectors: u.clone(),
        }
        .reconstruct();
        DensityMatrix::new(&iso * small * iso.adjoint())
    };
    let tag = rng.random::<u64>();
    Ok((embed(&p)?.with_basis_tag(tag), embed(&q)?.with_basis_tag(tag)))
}

/// Pair with `Tr Gρ, Tr Gσ ≤ E` and `½‖ρ − σ‖₁ ≤ ε`, where `G` is diagonal
/// in the computational basis with the given levels (typically `H^a`).
pub fn moment_constrained_pair_with(
    moment: &HamiltonianSpectrum,
    energy: f64,
    dim: usize,
    eps: f64,
    rng: &mut SampleRng,
) -> Result<(DensityMatrix, DensityMatrix)> {
    check_epsilon(eps)?;
    let saturate = rng.random::<bool>();
    let (rho, _) = energy_constrained_with(moment, energy, dim, saturate, rng)?;
    let (tau, _) = energy_constrained_with(moment, energy, dim, !saturate, rng)?;
    let full = trace_distance(&rho, &tau)?;
    let t = if full <= eps { 1.0 } else { eps / full };
    Ok((rho.clone(), tau.mix(&rho, t)?))
}

/// `U ρ U†`.
pub fn rotate(rho: &DensityMatrix, u: &CMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(u * rho.matrix() * u.adjoint())
}

/// Random state diagonal in the eigenbasis of `rho`.
pub fn commuting_with(rho: &DensityMatrix, rng: &mut SampleRng) -> Result<DensityMatrix> {
    let dim = rho.dim();
    let w = random_probability(dim, rng.random_range(1..=dim), rng);
    DensityMatrix::from_eigen(&w, &rho.hermitian().spectral().vectors)
}

/// `ω = cρ + (1 − c)τ`. When `ρ` and `σ` do not commute, `τ` is drawn
/// diagonal in the eigenbasis of `ρ` so that `[ρ, ω] = 0`.
pub fn dominating_reference_with(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    c: f64,
    rng: &mut SampleRng,
) -> Result<DensityMatrix> {
    if !(c > 0.0 && c < 1.0) {
        return Err(invalid("c", format!("{c} not in (0, 1)")));
    }
    let tau = if crate::operator::commute(rho, sigma) {
        random_density_with(rho.dim(), rho.dim(), rng)?
    } else {
        commuting_with(rho, rng)?
    };
    rho.mix(&tau, c)
}

/// Commuting pair at trace distance `ε` together with
/// `ω = c·max(p, q) + (1 − c(1 + ε))τ`, which satisfies `cρ, cσ ≤ ω`. The
/// constant is `c = c₀/(1 + ε)`; returns `(ρ, σ, ω, c)`.
pub fn two_sided_dominated_with(
    dim: usize,
    eps: f64,
    c0: f64,
    rng: &mut SampleRng,
) -> Result<(DensityMatrix, DensityMatrix, DensityMatrix, f64)> {
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(invalid("c", format!("{c0} not in (0, 1)")));
    }
    let (p, q) = commuting_distributions(dim, eps, rng)?;
    let c = c0 / (1.0 + eps);
    let tau = random_probability(dim, rng.random_range(1..=dim), rng);
    let rest = 1.0 - c * (1.0 + eps);
    let w: Vec<f64> = p
        .iter()
        .zip(&q)
        .zip(&tau)
        .map(|((a, b), t)| c * a.max(*b) + rest * t)
        .collect();
    let total: f64 = w.iter().sum();
    let w: Vec<f64> = w.iter().map(|x| x / total).collect();
    let u = haar_unitary(dim, rng);
    let tag = rng.random::<u64>();
    Ok((
        DensityMatrix::from_eigen(&p, &u)?.with_basis_tag(tag),
        DensityMatrix::from_eigen(&q, &u)?.with_basis_tag(tag),
        DensityMatrix::from_eigen(&w, &u)?.with_basis_tag(tag),
        c,
    ))
}
