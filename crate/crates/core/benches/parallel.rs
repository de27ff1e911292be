//! Sequential against parallel execution on the two data-parallel workloads:
//! quadrature node evaluation and seeded identity sweeps.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use qdeform::fourier_gauss::{gauss_hermite, gauss_hermite_side, Direction, FGSpec};
use qdeform::par::Execution;
use qdeform::verify::{run_suite, Suite, SuiteOptions};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn quadrature(c: &mut Criterion) {
    let spec = FGSpec::new(0.9, 0.3, 0.5, Complex64::new(0.2, 0.0), 0.5);
    let mut group = c.benchmark_group("gauss_hermite_side");
    for nodes in [128, 256] {
        // build the cached rule outside the timed loop
        gauss_hermite(nodes).expect("rule builds");
        for (label, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(label, nodes), &nodes, |b, &nodes| {
                b.iter(|| gauss_hermite_side(black_box(&spec), Direction::Forward, nodes, mode).expect("finite"))
            });
        }
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for suite in [Suite::MatrixQ, Suite::Reductions] {
        for (label, mode) in MODES {
            let opts = SuiteOptions {
                execution: mode,
                ..Default::default()
            };
            group.bench_function(BenchmarkId::new(label, suite.name()), |b| {
                b.iter(|| run_suite(black_box(suite), &opts).expect("suite runs"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, quadrature, sweeps);
criterion_main!(benches);
