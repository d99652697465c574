use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ccrflow::classify::{build_example_symbol, classify_batch, conjugacy_classes};
use ccrflow::linalg::ComplexMatrix;
use ccrflow::par::Execution;
use ccrflow::symplectic::brb_probe;
use ccrflow::{sample, ToleranceConfig};

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn brb_multistart(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let r = sample::positive(&mut rng, 4, 1.0, 3.0);
    let mut group = c.benchmark_group("brb_probe_16_trials");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| b.iter(|| brb_probe(&r, 16, 0, exec).unwrap()));
    }
    group.finish();
}

fn batch_classify(c: &mut Criterion) {
    let tol = ToleranceConfig::default();
    let specs: Vec<_> = (0..400)
        .map(|k| {
            let lambda = 0.2 + 0.6 * (k as f64 / 400.0);
            build_example_symbol(lambda, &[1 + (k % 3) as u64, 2 + (k % 5) as u64]).unwrap()
        })
        .collect();
    let mut group = c.benchmark_group("classify");
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new("batch_400", name), &specs, |b, s| b.iter(|| classify_batch(s, &tol, exec)));
        group.bench_with_input(BenchmarkId::new("conjugacy_classes_400", name), &specs, |b, s| {
            b.iter(|| conjugacy_classes(s, &tol, exec).unwrap())
        });
    }
    group.finish();
}

fn matmul(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut group = c.benchmark_group("matmul");
    for n in [64usize, 256] {
        let a: ComplexMatrix = sample::matrix_with_norm(&mut rng, n, 1.0);
        let b: ComplexMatrix = sample::matrix_with_norm(&mut rng, n, 1.0);
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |bench, _| bench.iter(|| a.matmul_with(&b, exec)));
        }
    }
    group.finish();
}

criterion_group!(benches, brb_multistart, batch_classify, matmul);
criterion_main!(benches);
