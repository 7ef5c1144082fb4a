//! The standard verification suite: one campaign per bound and sample family
//! at desk-scale dimensions.

use super::CampaignConfig;
use crate::stategen::{SampleKind, SampleSpec};

use SampleKind::*;

fn spec(kind: SampleKind, dims: &[usize]) -> SampleSpec {
    SampleSpec::new(kind, dims.to_vec())
}

fn with(mut s: SampleSpec, f: impl FnOnce(&mut SampleSpec)) -> SampleSpec {
    f(&mut s);
    s
}

/// Campaigns covering every registered inequality, each with `samples`
/// samples per grid value and seed `seed`.
pub fn standard_suite(samples: usize, seed: u64) -> Vec<CampaignConfig> {
    let mut out: Vec<(&str, SampleSpec)> = Vec::new();
    for (m, d) in [(1, 6), (2, 8)] {
        let s = with(spec(MajorizedPair, &[d]), |s| s.m = Some(m));
        for id in ["thm3a.rank", "thm3b.energy", "remark6.energy"] {
            out.push((id, s.clone()));
        }
    }
    out.push(("dominance.thm3b", with(spec(MajorizedPair, &[12]), |s| s.m = Some(1))));
    for id in ["prop1.truncation", "prop2.llb"] {
        out.push((id, spec(Generic, &[5])));
        out.push((id, spec(CommutingPair, &[8])));
    }
    for a in [1.0, 2.0, 4.0] {
        let s = with(spec(EnergyConstrained, &[6]), |s| s.a = Some(a));
        out.push(("prop3.energy.refined", s.clone()));
        out.push(("prop3.energy.simple", s.clone()));
        out.push(("cor3.energy", s));
    }
    out.push((
        "prop3.energy.refined",
        with(spec(ExtremalEnergyPair, &[3]), |s| s.k = Some(3)),
    ));
    out.push(("prop4.re", with(spec(EnergyConstrained, &[4]), |s| s.a = Some(2.0))));
    for id in ["cor4.re.gibbs", "remark8.max"] {
        out.push((id, with(spec(EnergyConstrained, &[6]), |s| s.a = Some(2.0))));
    }
    for id in ["prop5.re", "remark9.envelope"] {
        out.push((id, spec(CommutingPair, &[5])));
        out.push((id, spec(Generic, &[4])));
    }
    out.push(("prop5.re.exact", spec(CommutingPair, &[5])));
    for id in ["cor5.re", "cor5.re.exact", "remark9.envelope.two_sided"] {
        out.push((id, spec(CommutingPair, &[5])));
    }
    for id in [
        "prop6.qce.rank",
        "prop6.qce.rank.h_up",
        "prop6.qce.energy",
        "winter.qce",
        "dominance.winter",
    ] {
        out.push((id, spec(CommutingPair, &[3, 3])));
    }
    out.push(("cor1.entropy.d_star", spec(CommutingPair, &[6])));
    for id in ["cor1.mi.rank", "cor2.mi.refined", "cor2.mi.loose", "dominance.cor2"] {
        out.push((id, spec(CommutingPair, &[3, 3])));
    }
    for id in [
        "prop7.qce.rank",
        "prop7.qce.rank.h_up",
        "prop7.qce.energy.refined",
        "prop7.qce.energy.loose",
        "dominance.prop7",
        "prop8.qce.truncation",
        "cor6.ensemble",
        "prop9.qce.llb",
        "cor7.ensemble.llb",
    ] {
        out.push((id, spec(QcPair, &[3, 4])));
    }
    out.push(("eq38.commuting", spec(CommutingPair, &[6])));
    out.push(("eq38.general", spec(Generic, &[4])));
    out.push(("mirsky", spec(Generic, &[6])));
    for id in ["eq2.concavity", "eq2.concavity.lower"] {
        out.push((id, spec(Generic, &[6])));
    }
    for id in ["eq10.qce", "eq10.qce.lower", "eq14.mi", "eq15.mi"] {
        out.push((id, spec(Generic, &[3, 3])));
    }
    for id in ["identity.d_mul", "identity.d_c", "inequality.re_sum"] {
        out.push((id, spec(Generic, &[4])));
    }
    out.into_iter()
        .map(|(id, s)| CampaignConfig::new(id, s, samples).with_seed(seed))
        .collect()
}

/// Entanglement-of-formation campaigns on two-qubit pairs.
pub fn eof_suite(samples: usize, seed: u64) -> Vec<CampaignConfig> {
    [
        "prop10.eof.rank",
        "prop10.eof.rank.h_up",
        "prop10.eof.fidelity",
        "prop10.eof.energy",
        "prop10.eof.fidelity.energy",
    ]
    .into_iter()
    .map(|id| CampaignConfig::new(id, spec(Generic, &[2, 2]), samples).with_seed(seed))
    .collect()
}
