use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spectriple::sigsolver::{dense_nullspace_solutions, SearchSpace};
use spectriple::suite;
use spectriple::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn clifford_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("clifford_sweep");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| suite::clifford_sweep(exec).unwrap()));
    }
    g.finish();
}

fn spin(c: &mut Criterion) {
    let mut g = c.benchmark_group("spin_500");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| suite::spin(2, 1, 7, suite::SPIN_SAMPLES, exec).unwrap()));
    }
    g.finish();
}

fn morphism(c: &mut Criterion) {
    let mut g = c.benchmark_group("morphism_200");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| suite::morphism(2, 1, 7, suite::BRIDGE_SAMPLES, exec).unwrap()));
    }
    g.finish();
}

fn sigsolve_dense(c: &mut Criterion) {
    let space = SearchSpace::euclidean(2, false).unwrap();
    let mut g = c.benchmark_group("sigsolve_dense");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| dense_nullspace_solutions(&space, -1, -1, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, clifford_sweep, spin, morphism, sigsolve_dense);
criterion_main!(benches);
