use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use epp_bench::{benchmark_table, rating_matrix, synthetic_counts};
use epp_core::{fit_epp, generate_matches, pca_embed, FitConfig, MatchConfig};

fn bench_generate_matches(c: &mut Criterion) {
    let table = benchmark_table(1, 11);
    c.bench_function("generate_matches/44_players_20_splits", |b| {
        b.iter(|| generate_matches(black_box(&table), MatchConfig::default()))
    });
}

fn bench_fit(c: &mut Criterion) {
    let small = synthetic_counts(10, 200, 11);
    c.bench_function("fit_epp/10_players", |b| {
        b.iter(|| fit_epp(black_box(&small), &FitConfig::default()).unwrap())
    });

    let table = benchmark_table(1, 11);
    let large = generate_matches(&table, MatchConfig::default());
    c.bench_function("fit_epp/44_players", |b| {
        b.iter(|| fit_epp(black_box(&large), &FitConfig::default()).unwrap())
    });
}

fn bench_pca(c: &mut Criterion) {
    let matrix = rating_matrix(11, 44, 11);
    c.bench_function("pca_embed/11x44", |b| {
        b.iter(|| pca_embed(black_box(&matrix), 2).unwrap())
    });
}

criterion_group!(benches, bench_generate_matches, bench_fit, bench_pca);
criterion_main!(benches);
