use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stemsize_bench::{dense_series, may_e1};
use stemsize_core::ehp::{a_series, admissible_series};
use stemsize_core::{hilbert_cumulative, GeneratorKind};

fn factor(c: &mut Criterion) {
    let mut g = c.benchmark_group("mul_factor");
    for n in [1usize << 12, 1 << 16] {
        let s = dense_series(n);
        g.bench_with_input(BenchmarkId::new("polynomial", n), &s, |b, s| {
            b.iter(|| s.mul_factor(GeneratorKind::Polynomial, black_box(3)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("exterior", n), &s, |b, s| {
            b.iter(|| s.mul_factor(GeneratorKind::Exterior, black_box(3)).unwrap())
        });
    }
    g.finish();
}

fn may(c: &mut Criterion) {
    let spec = may_e1();
    let mut g = c.benchmark_group("may_e1_cumulative");
    g.sample_size(10);
    for n in [1u64 << 14, 1 << 16] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| hilbert_cumulative(&spec, n).unwrap())
        });
    }
    g.finish();
}

fn ehp(c: &mut Criterion) {
    c.bench_function("admissible_series p=2 N=200", |b| {
        b.iter(|| admissible_series(2, black_box(200)).unwrap())
    });
    c.bench_function("a_series p=2 n=2 N=60", |b| {
        b.iter(|| a_series(2, 2, black_box(60)).unwrap())
    });
}

criterion_group!(benches, factor, may, ehp);
criterion_main!(benches);
