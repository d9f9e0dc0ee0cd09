//! Parallel versus single-threaded execution of the hot paths. The
//! sequential side runs inside a one-thread rayon pool, which exercises the
//! same code as a build with `--no-default-features`.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qser_core::congruence::{default_instances, check_jobs, Job, DEFAULT_TRUNC_CEILING};
use qser_core::identities::{catalog, verify_entries};
use qser_core::series::{series_f, theta_phi, Ring};
use rayon::ThreadPoolBuilder;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("sequential", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("parallel", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn sparse_mul(c: &mut Criterion) {
    let mut g = c.benchmark_group("sparse_mul_mod8");
    let trunc = 400_000;
    let ring = Ring::modular(8).unwrap();
    let dense = series_f(6, trunc, ring).div(&theta_phi(1, trunc, ring).twist()).unwrap();
    let sparse = series_f(1, trunc, ring);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new(name, trunc), |b| {
            b.iter(|| pool.install(|| dense.mul(&sparse).unwrap()))
        });
    }
    g.finish();
}

fn claim_batch(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_claims");
    g.sample_size(10);
    let jobs: Vec<Job> = ["elthm", "nathsel", "james2", "thm-ellr"]
        .iter()
        .flat_map(|id| default_instances(id).unwrap())
        .map(|claim| Job::new(claim, 300))
        .collect();
    for (name, pool) in pools() {
        g.bench_function(name, |b| b.iter(|| pool.install(|| check_jobs(&jobs, DEFAULT_TRUNC_CEILING))));
    }
    g.finish();
}

fn identity_catalog(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_all");
    g.sample_size(10);
    let entries = catalog();
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new(name, 200), |b| b.iter(|| pool.install(|| verify_entries(&entries, 200))));
    }
    g.finish();
}

criterion_group!(benches, sparse_mul, claim_batch, identity_catalog);
criterion_main!(benches);
