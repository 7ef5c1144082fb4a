//! Binding of bound identifiers to the sample families that satisfy their
//! hypotheses and to the evaluator that produces them.

use crate::bounds::{
    d_c_identity, d_mul_identity, energy_moment_difference, energy_scb, entropy_concavity, entropy_joint_support_cb,
    entropy_llb, entropy_scb_energy, entropy_scb_rank, entropy_truncation_scb, eof_scb, faithful_hamiltonian, find,
    mi_commuting_energy_cb, mi_commuting_rank_cb, mi_mixing, mirsky, qce_commuting_cb, qce_mixing, qce_qc_scb,
    qce_qc_truncation_and_llb, re_dominated_scb, re_faithful_cb, re_gibbs_cb, re_inequality, split_entropy_inequality,
    split_entropy_inequality_commuting, BoundEvaluation, DominatedMode, GibbsReference, MarginalConstraint,
};
use crate::error::{Error, Result};
use crate::operator::DensityMatrix;
use crate::operator::PositiveOperator;
use crate::stategen::{
    commuting_bipartite_pair_with, commuting_pair_with, dominating_reference_with, energy_constrained_with,
    extremal_energy_pair, generic_pair_with, moment_constrained_pair_with, partial_majorized_pair_with, perturb_within,
    qc_pair_with, random_density_with, random_state, rotate, two_sided_dominated_with, SampleKind, SampleRng,
    SampleSpec,
};

use rand::Rng;

use SampleKind::*;

type EvalFn = fn(&SampleSpec, f64, &mut SampleRng) -> Result<Vec<BoundEvaluation>>;

/// A registered bound: its identifier, the sample kinds that satisfy its
/// hypotheses and the evaluator run on each sample.
pub struct BoundEntry {
    pub id: &'static str,
    pub kinds: &'static [SampleKind],
    pub summary: &'static str,
    eval: EvalFn,
}

const REDRAWS: usize = 1000;

impl std::fmt::Debug for BoundEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundEntry")
            .field("id", &self.id)
            .field("kinds", &self.kinds)
            .finish_non_exhaustive()
    }
}

impl BoundEntry {
    /// Draws one sample and returns every evaluation its evaluator produces.
    pub fn evaluate_all(&self, spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
        (self.eval)(spec, eps, rng)
    }

    /// Draws samples until the evaluator reports this entry's identifier
    /// (variants that only exist on part of the sample space are redrawn).
    pub fn evaluate(&self, spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<BoundEvaluation> {
        for _ in 0..REDRAWS {
            let evals = (self.eval)(spec, eps, rng)?;
            if let Some(e) = find(&evals, self.id) {
                return Ok(e.clone());
            }
        }
        Err(Error::Generation(format!(
            "{} not produced in {REDRAWS} draws at ε = {eps}",
            self.id
        )))
    }

    pub fn supports(&self, kind: SampleKind) -> bool {
        self.kinds.contains(&kind)
    }

    /// Configuration error naming the compatible kinds when `spec` does not
    /// fit.
    pub fn check(&self, spec: &SampleSpec) -> Result<()> {
        if !self.supports(spec.kind) {
            let names: Vec<&str> = self.kinds.iter().map(|k| k.name()).collect();
            return Err(Error::Config(format!(
                "sample kind `{}` is incompatible with `{}`; compatible kinds: {}",
                spec.kind.name(),
                self.id,
                names.join(", ")
            )));
        }
        spec.validate()?;
        if self.kinds.iter().all(|k| bipartite_kind(self.id, *k)) && spec.dims.len() != 2 {
            return Err(Error::Config(format!(
                "`{}` needs bipartite dims [d_A, d_B], got {:?}",
                self.id, spec.dims
            )));
        }
        Ok(())
    }
}

fn bipartite_kind(id: &str, kind: SampleKind) -> bool {
    kind == QcPair
        || [
            "prop6.",
            "winter.",
            "dominance.winter",
            "cor1.mi",
            "cor2.",
            "dominance.cor2",
            "eq10.",
            "eq14.",
            "eq15.",
            "prop10.",
        ]
        .iter()
        .any(|p| id.starts_with(p))
}

pub fn lookup(id: &str) -> Result<&'static BoundEntry> {
    registry().iter().find(|e| e.id == id).ok_or_else(|| {
        let ids: Vec<&str> = registry().iter().map(|e| e.id).collect();
        Error::Config(format!("unknown bound `{id}`; registered: {}", ids.join(", ")))
    })
}

fn m_of(spec: &SampleSpec) -> usize {
    spec.m.unwrap_or(1)
}

fn a_of(spec: &SampleSpec, default: f64) -> f64 {
    spec.a.unwrap_or(default)
}

fn c_of(spec: &SampleSpec, default: f64) -> f64 {
    spec.c.unwrap_or(default)
}

fn energy_of(spec: &SampleSpec) -> f64 {
    spec.energy.unwrap_or(2.0)
}

fn draw_pair(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<(DensityMatrix, DensityMatrix)> {
    let dim = spec.dim();
    match spec.kind {
        Generic => generic_pair_with(dim, eps, rng),
        CommutingPair => commuting_pair_with(dim, eps, rng),
        MajorizedPair => partial_majorized_pair_with(dim, m_of(spec), eps, rng),
        EnergyConstrained => {
            let h = spec.build_spectrum()?;
            let saturate = rng.random::<bool>();
            let (rho, _) = energy_constrained_with(&h, energy_of(spec), dim, saturate, rng)?;
            let sigma = perturb_within(&rho, eps, rng)?;
            Ok((rho, sigma))
        }
        ExtremalEnergyPair => extremal_energy_pair(&spec.build_spectrum()?, spec.k.unwrap_or(2), eps),
        QcPair => Err(Error::Config("q-c pairs are not single-system pairs".into())),
    }
}

fn draw_bipartite(
    spec: &SampleSpec,
    eps: f64,
    rng: &mut SampleRng,
) -> Result<(DensityMatrix, DensityMatrix, (usize, usize))> {
    let dims = spec.bipartite()?;
    let pair = match spec.kind {
        CommutingPair => commuting_bipartite_pair_with(dims.0, dims.1, eps, rng)?,
        _ => draw_pair(spec, eps, rng)?,
    };
    Ok((pair.0, pair.1, dims))
}

fn draw_independent(spec: &SampleSpec, rng: &mut SampleRng) -> Result<(DensityMatrix, DensityMatrix)> {
    Ok((random_state(spec.dim(), rng)?, random_state(spec.dim(), rng)?))
}

fn constraint(spec: &SampleSpec, energy: bool) -> Result<MarginalConstraint> {
    Ok(if energy {
        MarginalConstraint::Energy(spec.build_spectrum()?)
    } else {
        MarginalConstraint::Rank
    })
}

fn thm3a(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let m = m_of(spec);
    let (rho, sigma) = partial_majorized_pair_with(spec.dim(), m, eps, rng)?;
    entropy_scb_rank(&rho, &sigma, m, eps)
}

fn thm3b(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let m = m_of(spec);
    let (rho, sigma) = partial_majorized_pair_with(spec.dim(), m, eps, rng)?;
    entropy_scb_energy(&rho, &sigma, &spec.build_spectrum()?, m, eps)
}

fn prop1(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = draw_pair(spec, eps, rng)?;
    entropy_truncation_scb(&rho, &sigma, eps)
}

fn prop2(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = draw_pair(spec, eps, rng)?;
    entropy_llb(&rho, &sigma, eps)
}

fn prop3(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = draw_pair(spec, eps, rng)?;
    energy_scb(&rho, &sigma, &spec.build_spectrum()?, a_of(spec, 1.0), eps)
}

fn cor3(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let h = spec.build_spectrum()?;
    let a = a_of(spec, 1.0);
    let energy = energy_of(spec);
    let (rho, sigma) = moment_constrained_pair_with(&h.power(a)?, energy, spec.dim(), eps, rng)?;
    energy_moment_difference(&rho, &sigma, &h, a, energy, eps)
}

fn prop4(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let dim = spec.dim();
    let (a, c, energy) = (a_of(spec, 2.0), c_of(spec, 1.0), energy_of(spec));
    let omega = random_density_with(dim, dim, rng)?;
    let (h, basis) = faithful_hamiltonian(&omega, c)?;
    let (rho, sigma) = moment_constrained_pair_with(&h.power(a)?, energy, dim, eps, rng)?;
    re_faithful_cb(
        &rotate(&rho, &basis)?,
        &rotate(&sigma, &basis)?,
        &omega,
        c,
        a,
        energy,
        eps,
    )
}

fn cor4(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let h = spec.build_spectrum()?;
    let (a, energy) = (a_of(spec, 2.0), energy_of(spec));
    let reference = GibbsReference::at_energy(h.clone(), energy)?;
    let (rho, sigma) = moment_constrained_pair_with(&h.power(a)?, energy, spec.dim(), eps, rng)?;
    re_gibbs_cb(&rho, &sigma, &reference, a, energy, eps)
}

fn prop5(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let c = c_of(spec, 0.5);
    let (rho, sigma) = draw_pair(spec, eps, rng)?;
    let omega = dominating_reference_with(&rho, &sigma, c, rng)?;
    re_dominated_scb(&rho, &sigma, &omega, c, eps, DominatedMode::OneSided)
}

fn cor5(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma, omega, c) = two_sided_dominated_with(spec.dim(), eps, c_of(spec, 0.5), rng)?;
    re_dominated_scb(&rho, &sigma, &omega, c, eps, DominatedMode::TwoSided)
}

fn prop6_rank(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma, dims) = draw_bipartite(spec, eps, rng)?;
    qce_commuting_cb(&rho, &sigma, dims, &MarginalConstraint::Rank, eps)
}

fn prop6_energy(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma, dims) = draw_bipartite(spec, eps, rng)?;
    qce_commuting_cb(&rho, &sigma, dims, &constraint(spec, true)?, eps)
}

fn cor1_entropy(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = commuting_pair_with(spec.dim(), eps, rng)?;
    entropy_joint_support_cb(&rho, &sigma, eps)
}

fn cor1_mi(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma, dims) = draw_bipartite(spec, eps, rng)?;
    mi_commuting_rank_cb(&rho, &sigma, dims, eps)
}

fn cor2(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma, dims) = draw_bipartite(spec, eps, rng)?;
    mi_commuting_energy_cb(&rho, &sigma, dims, &spec.build_spectrum()?, eps)
}

fn prop7_rank(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (d_a, blocks) = spec.bipartite()?;
    let (rho, sigma) = qc_pair_with(d_a, blocks, eps, rng)?;
    qce_qc_scb(&rho, &sigma, &MarginalConstraint::Rank, eps)
}

fn prop7_energy(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (d_a, blocks) = spec.bipartite()?;
    let (rho, sigma) = qc_pair_with(d_a, blocks, eps, rng)?;
    qce_qc_scb(&rho, &sigma, &constraint(spec, true)?, eps)
}

fn prop8(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (d_a, blocks) = spec.bipartite()?;
    let (rho, sigma) = qc_pair_with(d_a, blocks, eps, rng)?;
    qce_qc_truncation_and_llb(&rho, &sigma, eps)
}

fn prop10(spec: &SampleSpec, eps: f64, rng: &mut SampleRng, energy: bool) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma, dims) = draw_bipartite(spec, eps, rng)?;
    eof_scb(&rho, &sigma, dims, &constraint(spec, energy)?, eps)
}

fn prop10_rank(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    prop10(spec, eps, rng, false)
}

fn prop10_energy(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    prop10(spec, eps, rng, true)
}

fn eq38(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = draw_pair(spec, eps, rng)?;
    if spec.kind == Generic {
        split_entropy_inequality(&rho, &sigma)
    } else {
        split_entropy_inequality_commuting(&rho, &sigma)
    }
}

fn mirsky_eval(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = draw_pair(spec, eps, rng)?;
    mirsky(&rho, &sigma)
}

fn eq2(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = draw_independent(spec, rng)?;
    entropy_concavity(&rho, &sigma, eps)
}

fn eq10(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = draw_independent(spec, rng)?;
    qce_mixing(&rho, &sigma, spec.bipartite()?, eps)
}

fn eq14(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let (rho, sigma) = draw_independent(spec, rng)?;
    mi_mixing(&rho, &sigma, spec.bipartite()?, eps)
}

fn positive_triple(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<[crate::operator::HermitianMatrix; 3]> {
    let dim = spec.dim();
    let a = random_state(dim, rng)?.hermitian().scale(rng.random_range(0.1..3.0));
    let b = random_density_with(dim, dim, rng)?
        .hermitian()
        .scale(rng.random_range(0.1..3.0));
    let c = random_state(dim, rng)?.hermitian().scale(eps);
    Ok([a, b, c])
}

fn d_mul(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let [a, b, _] = positive_triple(spec, eps, rng)?;
    d_mul_identity(&a, &b, 4.0 * eps)
}

fn d_c(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let [a, b, _] = positive_triple(spec, eps, rng)?;
    d_c_identity(&a, &b, 4.0 * eps)
}

fn re_sum(spec: &SampleSpec, eps: f64, rng: &mut SampleRng) -> Result<Vec<BoundEvaluation>> {
    let [a, b, c] = positive_triple(spec, eps, rng)?;
    re_inequality(&a, &b, &c)
}

const PAIRS: &[SampleKind] = &[Generic, CommutingPair, MajorizedPair, EnergyConstrained];
const ENERGY_PAIRS: &[SampleKind] = &[Generic, CommutingPair, EnergyConstrained, ExtremalEnergyPair];

macro_rules! entry {
    ($id:expr, $kinds:expr, $eval:expr, $summary:expr) => {
        BoundEntry {
            id: $id,
            kinds: $kinds,
            summary: $summary,
            eval: $eval,
        }
    };
}

static REGISTRY: &[BoundEntry] = &[
    entry!(
        "thm3a.rank",
        &[MajorizedPair],
        thm3a,
        "S(ρ) − S(σ) under m-partial majorization, rank form"
    ),
    entry!(
        "thm3b.energy",
        &[MajorizedPair],
        thm3b,
        "S(ρ) − S(σ) under m-partial majorization, energy form"
    ),
    entry!(
        "remark6.energy",
        &[MajorizedPair],
        thm3b,
        "simplified energy form εF_{H⁰_m}(E_m/ε) + h↑(ε)"
    ),
    entry!(
        "dominance.thm3b",
        &[MajorizedPair],
        thm3b,
        "piecewise energy form against its simplification, for ε ≤ 1 − 1/Z"
    ),
    entry!("prop1.truncation", PAIRS, prop1, "S(ρ) − S(σ) ≤ S̃(ρ ∧ εI) + h↑(ε)"),
    entry!("prop2.llb", PAIRS, prop2, "S(σ) ≥ S̃([ρ − εI]₊) − h↑(ε)"),
    entry!(
        "prop3.energy.refined",
        ENERGY_PAIRS,
        prop3,
        "E_H(ρ) − E_H(σ), refined pinched form"
    ),
    entry!(
        "prop3.energy.simple",
        ENERGY_PAIRS,
        prop3,
        "E_H(ρ) − E_H(σ) ≤ ε^{1−1/a}(Tr H^a ρ)^{1/a}"
    ),
    entry!(
        "cor3.energy",
        &[EnergyConstrained],
        cor3,
        "|E_H(ρ) − E_H(σ)| ≤ ε^{1−1/a}E^{1/a}"
    ),
    entry!(
        "prop4.re",
        &[EnergyConstrained],
        prop4,
        "D(·‖ω) for faithful ω with H = c(−ln ω + ln λ₁)"
    ),
    entry!(
        "cor4.re.gibbs",
        &[EnergyConstrained],
        cor4,
        "D(·‖γ) for a Gibbs reference"
    ),
    entry!(
        "remark8.max",
        &[EnergyConstrained],
        cor4,
        "Gibbs reference with the maximized entropy term"
    ),
    entry!(
        "prop5.re",
        &[CommutingPair, Generic],
        prop5,
        "D(ρ‖ω) − D(σ‖ω) for cρ ≤ ω"
    ),
    entry!(
        "prop5.re.exact",
        &[CommutingPair],
        prop5,
        "exact-distance variant of prop5.re"
    ),
    entry!(
        "remark9.envelope",
        &[CommutingPair, Generic],
        prop5,
        "envelope of the one-sided dominated bound"
    ),
    entry!("cor5.re", &[CommutingPair], cor5, "|D(ρ‖ω) − D(σ‖ω)| for cρ, cσ ≤ ω"),
    entry!(
        "cor5.re.exact",
        &[CommutingPair],
        cor5,
        "exact-distance variant of cor5.re"
    ),
    entry!(
        "remark9.envelope.two_sided",
        &[CommutingPair],
        cor5,
        "envelope of the two-sided dominated bound"
    ),
    entry!(
        "prop6.qce.rank",
        &[CommutingPair],
        prop6_rank,
        "S(A|B) on commuting pairs, rank form"
    ),
    entry!(
        "prop6.qce.rank.h_up",
        &[CommutingPair],
        prop6_rank,
        "S(A|B) on commuting pairs, h↑ form"
    ),
    entry!(
        "prop6.qce.energy",
        &[CommutingPair],
        prop6_energy,
        "S(A|B) on commuting pairs, energy form"
    ),
    entry!(
        "winter.qce",
        &[CommutingPair],
        prop6_rank,
        "reference bound 2ε ln d + g(ε)"
    ),
    entry!(
        "dominance.winter",
        &[CommutingPair],
        prop6_rank,
        "new conditional-entropy bound against the reference"
    ),
    entry!(
        "cor1.entropy.d_star",
        &[CommutingPair],
        cor1_entropy,
        "S(ρ) − S(σ) with d* the joint support rank"
    ),
    entry!(
        "cor1.mi.rank",
        &[CommutingPair],
        cor1_mi,
        "I(A:B) on commuting pairs, rank form"
    ),
    entry!(
        "cor2.mi.refined",
        &[CommutingPair],
        cor2,
        "I(A:B) on commuting pairs, refined energy form"
    ),
    entry!(
        "cor2.mi.loose",
        &[CommutingPair],
        cor2,
        "I(A:B) on commuting pairs, energy form"
    ),
    entry!(
        "dominance.cor2",
        &[CommutingPair],
        cor2,
        "refined against loose mutual-information bound"
    ),
    entry!(
        "prop7.qce.rank",
        &[QcPair],
        prop7_rank,
        "S(A|B) of q-c states, rank form"
    ),
    entry!(
        "prop7.qce.rank.h_up",
        &[QcPair],
        prop7_rank,
        "S(A|B) of q-c states, h↑ form"
    ),
    entry!(
        "prop7.qce.energy.refined",
        &[QcPair],
        prop7_energy,
        "S(A|B) of q-c states, refined energy form"
    ),
    entry!(
        "prop7.qce.energy.loose",
        &[QcPair],
        prop7_energy,
        "S(A|B) of q-c states, energy form"
    ),
    entry!(
        "dominance.prop7",
        &[QcPair],
        prop7_energy,
        "refined against loose q-c energy bound"
    ),
    entry!(
        "prop8.qce.truncation",
        &[QcPair],
        prop8,
        "S(A|B) of q-c states, truncation form"
    ),
    entry!(
        "cor6.ensemble",
        &[QcPair],
        prop8,
        "ensemble form of the q-c truncation bound"
    ),
    entry!(
        "prop9.qce.llb",
        &[QcPair],
        prop8,
        "local lower bound for S(A|B) of q-c states"
    ),
    entry!(
        "cor7.ensemble.llb",
        &[QcPair],
        prop8,
        "ensemble form of the q-c local lower bound"
    ),
    entry!(
        "prop10.eof.rank",
        &[Generic, CommutingPair],
        prop10_rank,
        "E_F, rank form"
    ),
    entry!(
        "prop10.eof.rank.h_up",
        &[Generic, CommutingPair],
        prop10_rank,
        "E_F, h↑ form"
    ),
    entry!(
        "prop10.eof.fidelity",
        &[Generic, CommutingPair],
        prop10_rank,
        "E_F, rank form with the fidelity distance"
    ),
    entry!(
        "prop10.eof.energy",
        &[Generic, CommutingPair],
        prop10_energy,
        "E_F, energy form"
    ),
    entry!(
        "prop10.eof.fidelity.energy",
        &[Generic, CommutingPair],
        prop10_energy,
        "E_F, energy form with the fidelity distance"
    ),
    entry!(
        "eq38.commuting",
        &[CommutingPair, MajorizedPair],
        eq38,
        "entropy difference through the Jordan split"
    ),
    entry!(
        "eq38.general",
        &[Generic],
        eq38,
        "Jordan-split entropy relation on non-commuting pairs"
    ),
    entry!(
        "mirsky",
        &[Generic, CommutingPair],
        mirsky_eval,
        "Σ|λ↓_i(A) − λ↓_i(B)| ≤ ‖A − B‖₁"
    ),
    entry!(
        "eq2.concavity",
        &[Generic],
        eq2,
        "S(pρ + (1−p)σ) ≤ pS(ρ) + (1−p)S(σ) + h(p)"
    ),
    entry!("eq2.concavity.lower", &[Generic], eq2, "concavity of S"),
    entry!("eq10.qce", &[Generic], eq10, "almost-concavity of S(A|B)"),
    entry!("eq10.qce.lower", &[Generic], eq10, "concavity of S(A|B)"),
    entry!("eq14.mi", &[Generic], eq14, "I(A:B) of a mixture, lower bound"),
    entry!("eq15.mi", &[Generic], eq14, "I(A:B) of a mixture, upper bound"),
    entry!("identity.d_mul", &[Generic], d_mul, "D(cA‖cB) = cD(A‖B)"),
    entry!(
        "identity.d_c",
        &[Generic],
        d_c,
        "D(A‖cB) = D(A‖B) − Tr A ln c + (c − 1)Tr B"
    ),
    entry!("inequality.re_sum", &[Generic], re_sum, "D(A‖B + C) ≤ D(A‖B) + Tr C"),
];

pub fn registry() -> &'static [BoundEntry] {
    REGISTRY
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stategen::sample_rng;

    #[test]
    fn identifiers_are_unique() {
        let mut ids: Vec<&str> = registry().iter().map(|e| e.id).collect();
        ids.sort();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn incompatible_kind_lists_alternatives() {
        let entry = lookup("thm3a.rank").unwrap();
        let err = entry.check(&SampleSpec::new(Generic, vec![4])).unwrap_err().to_string();
        assert!(err.contains("majorized_pair"), "{err}");
        assert!(lookup("nope").is_err());
        let bip = lookup("prop6.qce.rank").unwrap();
        assert!(bip.check(&SampleSpec::new(CommutingPair, vec![4])).is_err());
        assert!(bip.check(&SampleSpec::new(CommutingPair, vec![2, 3])).is_ok());
    }

    #[test]
    fn every_entry_evaluates_on_a_compatible_kind() {
        for entry in registry() {
            let kind = entry.kinds[0];
            let dims = if bipartite_kind(entry.id, kind) {
                vec![2, 2]
            } else {
                vec![4]
            };
            let spec = SampleSpec::new(kind, dims);
            let mut rng = sample_rng(1, 0);
            for eps in [0.05, 0.5] {
                let e = entry
                    .evaluate(&spec, eps, &mut rng)
                    .unwrap_or_else(|err| panic!("{}: {err}", entry.id));
                assert_eq!(e.bound_id, entry.id);
                assert!(e.passes(1e-9), "{} {e:?}", entry.id);
            }
        }
    }
}
