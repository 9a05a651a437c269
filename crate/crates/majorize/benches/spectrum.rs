//! Spectrum-scan and fuzz throughput, comparing the library path (rayon
//! under the default `parallel` feature) against a hand-rolled sequential
//! evaluation of the same grid points. Build with
//! `--no-default-features` to measure the fully sequential library too.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use majorize::criteria::{build_grid, check_matrix_sufficient, tabulate_spectrum, CheckConfig};
use majorize::monotones::{matrix_derivation, matrix_divergence, matrix_divergence_tropical};
use majorize::oracle::{data_processing_fuzz, random_tuple, FuzzConfig, RandomSpec};
use majorize::tuple::MatrixTuple;

fn instances() -> (MatrixTuple, MatrixTuple) {
    let p = random_tuple(&RandomSpec { seed: 11, rows: 24, out_rows: 24, d: 3, sparsity: 0.0 })
        .unwrap();
    let q = random_tuple(&RandomSpec { seed: 12, rows: 20, out_rows: 20, d: 3, sparsity: 0.0 })
        .unwrap();
    (p, q)
}

fn bench_scan(c: &mut Criterion) {
    let (p, q) = instances();
    let grid = build_grid(3, 16, 64.0).unwrap();
    let cfg = CheckConfig::default();

    let mut group = c.benchmark_group("spectrum_scan");
    group.bench_function("library", |b| {
        b.iter(|| black_box(check_matrix_sufficient(&p, &q, &grid, &cfg).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let mut worst = f64::INFINITY;
            for a in &grid.alpha_points {
                let m = matrix_divergence(&p, a).unwrap() - matrix_divergence(&q, a).unwrap();
                worst = worst.min(m);
            }
            for beta in &grid.beta_points {
                let m = matrix_divergence_tropical(&p, beta).unwrap()
                    - matrix_divergence_tropical(&q, beta).unwrap();
                worst = worst.min(m);
            }
            for &(k, l) in &grid.kl_pairs {
                let mut gamma = vec![0.0; 3];
                gamma[l] = 1.0;
                let m = matrix_derivation(&p, k, &gamma).unwrap()
                    - matrix_derivation(&q, k, &gamma).unwrap();
                worst = worst.min(m);
            }
            black_box(worst)
        })
    });
    group.finish();
}

fn bench_tabulate(c: &mut Criterion) {
    let (p, q) = instances();
    let grid = build_grid(3, 16, 64.0).unwrap();
    c.bench_function("tabulate_spectrum", |b| {
        b.iter(|| black_box(tabulate_spectrum(&p, &q, &grid).unwrap()))
    });
}

fn bench_fuzz(c: &mut Criterion) {
    let cfg = FuzzConfig::new(64, 99, 3);
    c.bench_function("data_processing_fuzz_64", |b| {
        b.iter(|| black_box(data_processing_fuzz(&cfg).unwrap()))
    });
}

criterion_group!(benches, bench_scan, bench_tabulate, bench_fuzz);
criterion_main!(benches);
