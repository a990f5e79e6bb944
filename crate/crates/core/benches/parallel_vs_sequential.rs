//! Batch kernels on the default rayon pool versus a single-thread pool.
//! Build with `--no-default-features` to benchmark the plain sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hardy_embed::blaschke_eq::preimage_survey;
use hardy_embed::hardy::{boundary_gram, composition_matrix};
use hardy_embed::symbols::{BlaschkeProduct, BlaschkeZero, TaylorOptions};
use hardy_embed::C64;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("pool", rayon::ThreadPoolBuilder::new().build().unwrap()),
        ("single", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
    ]
}

fn product() -> BlaschkeProduct {
    let zeros = [C64::new(0.3, 0.2), C64::new(-0.5, 0.1), C64::new(0.1, -0.7)]
        .into_iter()
        .map(|alpha| BlaschkeZero { alpha, multiplicity: 1 })
        .collect();
    BlaschkeProduct::new(0.0, 0, zeros).unwrap()
}

fn bench(c: &mut Criterion) {
    let b = product();
    let opts = TaylorOptions::default();
    let mut g = c.benchmark_group("batch");
    g.sample_size(20);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new("composition_matrix_64", name), |bench| {
            pool.install(|| bench.iter(|| composition_matrix(black_box(&b), 64, &opts).unwrap()))
        });
        g.bench_function(BenchmarkId::new("boundary_gram_32x4096", name), |bench| {
            pool.install(|| bench.iter(|| boundary_gram(black_box(&b), 32, 4096).unwrap()))
        });
        g.bench_function(BenchmarkId::new("preimage_survey_200", name), |bench| {
            pool.install(|| bench.iter(|| preimage_survey(200, 2..=6, black_box(1729), 1e-10)))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
