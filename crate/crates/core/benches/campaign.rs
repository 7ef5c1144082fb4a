use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use afw_core::campaign::{run_campaign_with, CampaignConfig, Execution};
use afw_core::stategen::{SampleKind, SampleSpec};

fn configs() -> Vec<CampaignConfig> {
    vec![
        CampaignConfig::new("thm3b.energy", SampleSpec::new(SampleKind::MajorizedPair, vec![8]), 200),
        CampaignConfig::new(
            "prop7.qce.energy.refined",
            SampleSpec::new(SampleKind::QcPair, vec![3, 4]),
            200,
        ),
        CampaignConfig::new("prop10.eof.rank", SampleSpec::new(SampleKind::Generic, vec![2, 2]), 200),
    ]
}

fn bench_execution(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    for cfg in configs() {
        group.bench_with_input(BenchmarkId::new("sequential", &cfg.bound_id), &cfg, |b, cfg| {
            b.iter(|| run_campaign_with(cfg, Execution::Sequential).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("parallel", &cfg.bound_id), &cfg, |b, cfg| {
            b.iter(|| run_campaign_with(cfg, Execution::Parallel(None)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_execution);
criterion_main!(benches);
