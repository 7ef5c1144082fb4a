//! Dense Hermitian and density-matrix algebra.
//!
//! Every operator is a `DMatrix<Complex64>` wrapped in a newtype that records
//! which invariants have been checked: [`HermitianMatrix`] (conjugate
//! symmetric), [`SubHermitian`] (positive, trace at most one) and
//! [`DensityMatrix`] (positive, unit trace). Eigendecompositions are computed
//! lazily and cached, so repeated entropy or distance evaluations on the same
//! state only diagonalize once.

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Maximum tolerated `|A_ij - conj(A_ji)|`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues above `-POSITIVITY_TOL` are treated as roundoff and clipped.
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-12;
/// Frobenius norm of `[A, B]` below which two operators are taken to commute.
pub const COMMUTATION_TOL: f64 = 1e-10;
/// Eigenvalues at or below this threshold are outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

const TIE_TOL: f64 = 1e-12;

/// Eigenvalues in nonincreasing order with the matching orthonormal eigenvectors
/// stored column-wise.
#[derive(Clone, Debug)]
pub struct Spectral {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Spectral {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|x| x)
    }

    /// Number of eigenvalues strictly above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.values.iter().filter(|&&x| x > threshold).count()
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted nonincreasing.
///
/// Each eigenvector is rotated so that its first non-negligible component is
/// real and positive; ties among eigenvalues (within `1e-12`) are ordered by
/// the lexicographic order of the phase-fixed eigenvectors, which makes the
/// output reproducible across runs.
pub fn spectral_decompose(a: &HermitianMatrix) -> Spectral {
    decompose_raw(&a.data)
}

fn decompose_raw(m: &CMatrix) -> Spectral {
    let n = m.nrows();
    if n == 0 {
        return Spectral {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        };
    }
    let eig = m.clone().symmetric_eigen();
    let mut columns: Vec<(f64, CVector)> = (0..n)
        .map(|j| {
            let mut v: CVector = eig.eigenvectors.column(j).into_owned();
            fix_phase(&mut v);
            (eig.eigenvalues[j], v)
        })
        .collect();
    columns.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (columns[end - 1].0 - columns[end].0).abs() <= TIE_TOL * columns[start].0.abs().max(1.0) {
            end += 1;
        }
        if end - start > 1 {
            columns[start..end].sort_by(|a, b| lex_cmp(&a.1, &b.1));
        }
        start = end;
    }

    let values = columns.iter().map(|c| c.0).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| columns[j].1[i]);
    Spectral { values, vectors }
}

fn fix_phase(v: &mut CVector) {
    let pivot = v.iter().copied().find(|c| c.norm() > 1e-8);
    if let Some(c) = pivot {
        let phase = c.conj() / c.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

fn lex_cmp(a: &CVector, b: &CVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match y.re.partial_cmp(&x.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            other => return other,
        }
        match y.im.partial_cmp(&x.im).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

/// A conjugate-symmetric complex matrix.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    data: CMatrix,
    spectral: OnceLock<Arc<Spectral>>,
}

impl HermitianMatrix {
    /// Validates hermiticity within [`HERMITICITY_TOL`] and symmetrizes the
    /// residual so later eigendecompositions see an exactly Hermitian input.
    pub fn new(data: CMatrix) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        let n = data.nrows();
        let mut worst = (0, 0, 0.0f64);
        for i in 0..n {
            for j in i..n {
                let dev = (data[(i, j)] - data[(j, i)].conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        if worst.2 > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                row: worst.0,
                col: worst.1,
                deviation: worst.2,
            });
        }
        Ok(Self::symmetrized(data))
    }

    /// Wraps a matrix that is Hermitian by construction (sums, conjugations),
    /// averaging away roundoff asymmetry.
    pub(crate) fn symmetrized(data: CMatrix) -> Self {
        let sym = (&data + data.adjoint()) * Complex64::new(0.5, 0.0);
        Self {
            data: sym,
            spectral: OnceLock::new(),
        }
    }

    pub(crate) fn with_spectral(data: CMatrix, spectral: Spectral) -> Self {
        let h = Self::symmetrized(data);
        let _ = h.spectral.set(Arc::new(spectral));
        h
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let data = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self {
            data,
            spectral: OnceLock::new(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: CMatrix::zeros(dim, dim),
            spectral: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.diagonal().iter().map(|c| c.re).sum()
    }

    pub fn spectral(&self) -> &Spectral {
        self.spectral.get_or_init(|| Arc::new(decompose_raw(&self.data)))
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectral().values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues().iter().map(|x| x.abs()).sum()
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::symmetrized(&self.data - &other.data))
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::symmetrized(&self.data + &other.data))
    }

    pub fn scale(&self, c: f64) -> HermitianMatrix {
        Self::symmetrized(&self.data * Complex64::new(c, 0.0))
    }

    /// Positive and negative parts `[A]₊`, `[A]₋` with `A = [A]₊ − [A]₋`.
    pub fn jordan_parts(&self) -> (HermitianMatrix, HermitianMatrix) {
        let s = self.spectral();
        (
            Self::symmetrized(s.map(|x| x.max(0.0))),
            Self::symmetrized(s.map(|x| (-x).max(0.0))),
        )
    }

    /// Diagonal of the matrix in the given orthonormal basis (columns of `basis`),
    /// or in the computational basis when `basis` is `None`.
    pub fn diagonal_in(&self, basis: Option<&CMatrix>) -> Vec<f64> {
        match basis {
            None => self.data.diagonal().iter().map(|c| c.re).collect(),
            Some(u) => {
                let rotated = u.adjoint() * &self.data * u;
                rotated.diagonal().iter().map(|c| c.re).collect()
            }
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(a, b));
    }
    Ok(())
}

/// Operators that are positive semidefinite by construction.
pub trait PositiveOperator {
    fn hermitian(&self) -> &HermitianMatrix;

    fn dim(&self) -> usize {
        self.hermitian().dim()
    }

    fn trace(&self) -> f64 {
        self.hermitian().trace()
    }

    /// Eigenvalues with roundoff negatives clipped to zero.
    fn nonneg_eigenvalues(&self) -> Vec<f64> {
        self.hermitian().eigenvalues().iter().map(|x| x.max(0.0)).collect()
    }
}

/// Positive semidefinite operator with trace in `[0, 1]`: houses `ρ ∧ εI`,
/// `[ρ − εI]₊` and ensemble members `p_k ρ_k`.
#[derive(Clone, Debug)]
pub struct SubHermitian {
    base: HermitianMatrix,
}

impl SubHermitian {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let min = base.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        let tr = base.trace();
        if !(-TRACE_TOL..=1.0 + TRACE_TOL).contains(&tr) {
            return Err(invalid("trace", format!("sub-normalized operator has trace {tr}")));
        }
        Ok(Self { base })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            base: HermitianMatrix::zeros(dim),
        }
    }

    /// `weight · ρ` for `weight ∈ [0, 1]`.
    pub fn scaled_state(rho: &DensityMatrix, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(invalid("weight", format!("{weight} not in [0, 1]")));
        }
        let spectral = rho.hermitian().spectral();
        let scaled = Spectral {
            values: spectral.values.iter().map(|x| x * weight).collect(),
            vectors: spectral.vectors.clone(),
        };
        Ok(Self {
            base: HermitianMatrix::with_spectral(rho.matrix() * Complex64::new(weight, 0.0), scaled),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }
}

impl PositiveOperator for SubHermitian {
    fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }
}

/// Positive unit-trace Hermitian matrix.
///
/// `basis_tag` is an optional label shared by states that were built in the
/// same eigenbasis (commuting pairs from the generators); it is informational
/// and never replaces the numerical commutation check.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    base: HermitianMatrix,
    basis_tag: Option<u64>,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity. Eigenvalues in
    /// `[-1e-10, 0)` are clipped to zero and the state renormalized.
    pub fn new(data: CMatrix) -> Result<Self> {
        let base = HermitianMatrix::new(data)?;
        Self::from_hermitian(base)
    }

    pub fn from_hermitian(base: HermitianMatrix) -> Result<Self> {
        let tr = base.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        Self::check_and_clip(base)
    }

    /// Divides by the trace before validating; used by generators that build
    /// `G G†`-style operators.
    pub fn normalized(data: CMatrix) -> Result<Self> {
        let base = HermitianMatrix::new(data)?;
        let tr = base.trace();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::InvalidTrace(tr));
        }
        Self::check_and_clip(base.scale(1.0 / tr))
    }

    fn check_and_clip(base: HermitianMatrix) -> Result<Self> {
        let min = base.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        if min < 0.0 {
            let s = base.spectral();
            let clipped: Vec<f64> = s.values.iter().map(|x| x.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            let values: Vec<f64> = clipped.iter().map(|x| x / total).collect();
            let spectral = Spectral {
                values,
                vectors: s.vectors.clone(),
            };
            let data = spectral.reconstruct();
            return Ok(Self {
                base: HermitianMatrix::with_spectral(data, spectral),
                basis_tag: None,
            });
        }
        Ok(Self { base, basis_tag: None })
    }

    /// `U diag(p) U†` for a probability vector `p` and unitary `U`.
    pub fn from_eigen(probs: &[f64], basis: &CMatrix) -> Result<Self> {
        if basis.nrows() != probs.len() || basis.ncols() != probs.len() {
            return Err(Error::DimensionMismatch(basis.nrows(), probs.len()));
        }
        let spectral = Spectral {
            values: probs.to_vec(),
            vectors: basis.clone(),
        };
        let data = spectral.reconstruct();
        Self::new(data)
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::from_hermitian(HermitianMatrix::from_real_diagonal(probs))
    }

    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0) {
            return Err(invalid("psi", "zero vector"));
        }
        let v = psi / Complex64::new(norm, 0.0);
        Self::new(&v * v.adjoint())
    }

    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(invalid(
                "k",
                format!("basis index {k} out of range for dimension {dim}"),
            ));
        }
        let mut p = vec![0.0; dim];
        p[k] = 1.0;
        Self::diagonal(&p)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::diagonal(&vec![1.0 / dim as f64; dim]).expect("uniform distribution is a state")
    }

    pub fn with_basis_tag(mut self, tag: u64) -> Self {
        self.basis_tag = Some(tag);
        self
    }

    pub fn basis_tag(&self) -> Option<u64> {
        self.basis_tag
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.nonneg_eigenvalues()
    }

    pub fn rank(&self) -> usize {
        self.base.spectral().rank(SUPPORT_TOL)
    }

    /// `p ρ + (1 − p) σ`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        check_dims(self.dim(), other.dim())?;
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid("p", format!("{p} not in [0, 1]")));
        }
        let m = self.matrix() * Complex64::new(p, 0.0) + other.matrix() * Complex64::new(1.0 - p, 0.0);
        DensityMatrix::normalized(m)
    }
}

impl PositiveOperator for DensityMatrix {
    fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let diff = rho.hermitian().sub(sigma.hermitian())?;
    Ok((0.5 * diff.trace_norm()).clamp(0.0, 1.0))
}

/// Half the L¹ distance between two probability vectors.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Uhlmann fidelity `‖√ρ √σ‖₁²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim())?;
    let sqrt_rho = rho.hermitian().spectral().map(|x| x.max(0.0).sqrt());
    let inner = HermitianMatrix::symmetrized(&sqrt_rho * sigma.matrix() * &sqrt_rho);
    let root_sum: f64 = inner.eigenvalues().iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(invalid("epsilon", format!("{eps} must be a finite nonnegative number")));
    }
    Ok(())
}

fn spectral_transform<P: PositiveOperator>(op: &P, f: impl Fn(f64) -> f64) -> Result<SubHermitian> {
    let s = op.hermitian().spectral();
    let values: Vec<f64> = s.values.iter().map(|&x| f(x.max(0.0))).collect();
    let mapped = Spectral {
        values,
        vectors: s.vectors.clone(),
    };
    let data = mapped.reconstruct();
    SubHermitian::new(HermitianMatrix::with_spectral(data, mapped))
}

/// `[A − εI]₊`: eigenvalues `max(λ − ε, 0)` in the eigenbasis of `A`.
pub fn clip_below<P: PositiveOperator>(op: &P, eps: f64) -> Result<SubHermitian> {
    check_epsilon(eps)?;
    spectral_transform(op, |x| (x - eps).max(0.0))
}

/// `A ∧ εI`: eigenvalues `min(λ, ε)` in the eigenbasis of `A`.
pub fn cap_at<P: PositiveOperator>(op: &P, eps: f64) -> Result<SubHermitian> {
    check_epsilon(eps)?;
    spectral_transform(op, |x| x.min(eps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace over the complementary factor of `H_A ⊗ H_B`, with basis
/// ordering `|i⟩_A ⊗ |j⟩_B ↦ i·d_B + j`.
pub fn partial_trace_matrix(m: &CMatrix, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<CMatrix> {
    let total = m.nrows();
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != total || m.ncols() != total {
        return Err(Error::Factorization { total, dim_a, dim_b });
    }
    Ok(match keep {
        Subsystem::A => CMatrix::from_fn(dim_a, dim_a, |i, k| {
            (0..dim_b).map(|j| m[(i * dim_b + j, k * dim_b + j)]).sum()
        }),
        Subsystem::B => CMatrix::from_fn(dim_b, dim_b, |j, l| {
            (0..dim_a).map(|i| m[(i * dim_b + j, i * dim_b + l)]).sum()
        }),
    })
}

pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix> {
    let m = partial_trace_matrix(rho.matrix(), dims.0, dims.1, keep)?;
    DensityMatrix::normalized(m)
}

/// Partial trace of a positive (possibly sub-normalized) operator.
pub fn partial_trace_positive<P: PositiveOperator>(
    op: &P,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<SubHermitian> {
    let m = partial_trace_matrix(op.hermitian().matrix(), dims.0, dims.1, keep)?;
    SubHermitian::new(HermitianMatrix::symmetrized(m))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::normalized(kron(a.matrix(), b.matrix()))
}

/// Frobenius norm of `AB − BA`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).norm()
}

pub fn commute(rho: &DensityMatrix, sigma: &DensityMatrix) -> bool {
    rho.dim() == sigma.dim() && commutator_norm(rho.matrix(), sigma.matrix()) <= COMMUTATION_TOL
}

/// Common eigenbasis of two commuting states with the eigenvalue vectors of
/// each state in that basis (not individually sorted).
#[derive(Clone, Debug)]
pub struct SharedBasis {
    pub vectors: CMatrix,
    pub rho_weights: Vec<f64>,
    pub sigma_weights: Vec<f64>,
}

/// Simultaneous diagonalization by diagonalizing `ρ + cσ` for a few fixed
/// irrational `c` and keeping the first basis in which both states are
/// diagonal to within `1e-9`.
pub fn shared_eigenbasis(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<SharedBasis> {
    check_dims(rho.dim(), sigma.dim())?;
    let comm = commutator_norm(rho.matrix(), sigma.matrix());
    if comm > COMMUTATION_TOL {
        return Err(Error::NotCommuting(comm));
    }
    const MIXERS: [f64; 4] = [
        0.618_033_988_749_895,
        std::f64::consts::SQRT_2,
        0.1 * std::f64::consts::E,
        std::f64::consts::PI,
    ];
    let mut best: Option<(f64, SharedBasis)> = None;
    for &c in &MIXERS {
        let combo = HermitianMatrix::symmetrized(rho.matrix() + sigma.matrix() * Complex64::new(c, 0.0));
        let u = combo.spectral().vectors.clone();
        let rr = u.adjoint() * rho.matrix() * &u;
        let ss = u.adjoint() * sigma.matrix() * &u;
        let off = off_diagonal_max(&rr).max(off_diagonal_max(&ss));
        let candidate = SharedBasis {
            rho_weights: rr.diagonal().iter().map(|z| z.re.max(0.0)).collect(),
            sigma_weights: ss.diagonal().iter().map(|z| z.re.max(0.0)).collect(),
            vectors: u,
        };
        if off <= 1e-9 {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|(b, _)| off < *b) {
            best = Some((off, candidate));
        }
    }
    let (off, _) = best.expect("at least one mixer tried");
    Err(Error::Precondition(format!(
        "joint diagonalization failed (residual off-diagonal {off:.3e})"
    )))
}

fn off_diagonal_max(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// Diagonal `⟨τ_k|ρ|τ_k⟩` of the state in the basis given by `basis`'s columns
/// (computational basis when `None`): the pinching used by the energy bounds.
pub fn pinch(rho: &DensityMatrix, basis: Option<&CMatrix>) -> Vec<f64> {
    rho.hermitian()
        .diagonal_in(basis)
        .into_iter()
        .map(|x| x.max(0.0))
        .collect()
}
