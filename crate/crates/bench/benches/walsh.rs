use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pjlab_bench::{random_table_exact, random_table_float};
use pjlab_core::{influences_exact, influences_spectral, pbiased_coefficients, walsh_expand};
use std::hint::black_box;

fn expand(c: &mut Criterion) {
    let mut g = c.benchmark_group("walsh_expand");
    for n in [4usize, 6, 8] {
        let f = random_table_exact(n, 1);
        g.bench_with_input(BenchmarkId::new("exact", n), &f, |b, f| {
            b.iter(|| walsh_expand(black_box(f)).unwrap())
        });
    }
    for n in [4usize, 8, 12] {
        let f = random_table_float(n, 1);
        g.bench_with_input(BenchmarkId::new("float", n), &f, |b, f| {
            b.iter(|| walsh_expand(black_box(f)).unwrap())
        });
    }
    g.finish();
}

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("pbiased_coefficients");
    for n in [8usize, 12, 16] {
        let f = random_table_float(n, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| pbiased_coefficients(black_box(f)).unwrap())
        });
    }
    g.finish();
}

fn influences(c: &mut Criterion) {
    let mut g = c.benchmark_group("influences");
    for n in [4usize, 6, 8] {
        let f = random_table_exact(n, 3);
        let e = walsh_expand(&f).unwrap();
        g.bench_with_input(BenchmarkId::new("definitional", n), &f, |b, f| {
            b.iter(|| influences_exact(black_box(f)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("spectral", n), &e, |b, e| {
            b.iter(|| influences_spectral(black_box(e)))
        });
    }
    g.finish();
}

criterion_group!(benches, expand, basis, influences);
criterion_main!(benches);
