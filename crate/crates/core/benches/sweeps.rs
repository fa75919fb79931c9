//! Sequential versus data-parallel evaluation of the property sweeps.
//!
//! Built without the `parallel` feature, both arms run on one thread.

use std::hint::black_box;

use braidorder::harness::{run_suite, SuiteConfig};
use braidorder::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const CASES: &[(&str, usize)] = &[
    ("homomorphism", 500),
    ("cone-axioms", 2500),
    ("bi-invariance", 1000),
    ("surface-order", 200),
    ("psi-order", 10),
];

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for &(suite, samples) in CASES {
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            let cfg = SuiteConfig {
                samples: Some(samples),
                exec,
                ..SuiteConfig::seeded(1)
            };
            group.bench_with_input(BenchmarkId::new(suite, label), &cfg, |b, cfg| {
                b.iter(|| black_box(run_suite(suite, cfg).expect("suite runs")))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
