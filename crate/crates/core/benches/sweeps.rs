//! Sequential vs rayon sample sweeps over the heavier suites.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eqg_core::exec::Parallelism;
use eqg_core::verify::{run_single, Suite, VerifyConfig};

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for suite in [Suite::Dybe, Suite::Spaces, Suite::HalfCurrents] {
        for (label, par) in [("sequential", Parallelism::Sequential), ("rayon", Parallelism::Rayon)] {
            let cfg = VerifyConfig { samples: Some(64), parallelism: par, ..VerifyConfig::default() };
            group.bench_with_input(BenchmarkId::new(suite.name(), label), &cfg, |b, cfg| {
                b.iter(|| run_single(cfg, suite).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
