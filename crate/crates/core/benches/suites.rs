//! Sequential vs rayon execution of a few representative suites.
//!
//! Without the `parallel` feature both rows run sequentially.

use std::hint::black_box;
use std::sync::Arc;

use clifford_foliations::verify::{run_matrix, run_suite, SuiteConfig, SuiteId};
use clifford_foliations::{build_system, Execution};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn single_suites(c: &mut Criterion) {
    let system = Arc::new(build_system(4, 4, 1).unwrap());
    let cases = [
        (SuiteId::DiskImage, 10_000),
        (SuiteId::Geodesics, 100),
        (SuiteId::ComposedIdentities, 1_000),
    ];
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (suite, samples) in cases {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let config = SuiteConfig::new(suite, system.clone()).with_samples(samples).with_execution(exec);
            group.bench_with_input(BenchmarkId::new(suite.as_str(), format!("{exec:?}")), &config, |b, config| {
                b.iter(|| black_box(run_suite(config).unwrap()))
            });
        }
    }
    group.finish();
}

fn small_matrix(c: &mut Criterion) {
    let plan: Vec<SuiteConfig> = [(2, 2), (3, 2), (5, 1), (8, 1)]
        .into_iter()
        .flat_map(|(m, k)| {
            let system = Arc::new(build_system(m, k, 0).unwrap());
            [SuiteId::Relations, SuiteId::DiskImage, SuiteId::Symmetry, SuiteId::FkmConsistency]
                .map(|suite| SuiteConfig::new(suite, system.clone()).with_samples(2_000).with_execution(Execution::Sequential))
        })
        .collect();
    let mut group = c.benchmark_group("matrix");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(format!("{exec:?}"), |b| b.iter(|| black_box(run_matrix(&plan, exec))));
    }
    group.finish();
}

criterion_group!(benches, single_suites, small_matrix);
criterion_main!(benches);
