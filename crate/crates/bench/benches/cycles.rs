use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use slcsurf_bench::{chain, end_incidence, marked_star};
use slcsurf_cli::examples::{descend, large_k2};
use slcsurf_cli::ring::{graded_ring_dims, ring_generators};
use slcsurf_core::cycles::{hat_transform, semi_numerical_cycle};
use std::hint::black_box;

fn cycles(c: &mut Criterion) {
    let mut group = c.benchmark_group("semi_numerical_cycle");
    for n in [4, 16, 64] {
        let g = chain(n, -2);
        group.bench_with_input(BenchmarkId::new("chain", n), &g, |b, g| b.iter(|| semi_numerical_cycle(black_box(g))));
    }
    for arms in [3, 6] {
        let g = marked_star(arms, 4);
        group.bench_with_input(BenchmarkId::new("marked_star", arms), &g, |b, g| b.iter(|| semi_numerical_cycle(black_box(g))));
    }
    group.finish();

    let g = chain(12, -3);
    let inc = end_incidence(&g, 1000);
    c.bench_function("hat_transform/chain12", |b| b.iter(|| hat_transform(black_box(&g), black_box(&inc))));
}

fn ring(c: &mut Criterion) {
    c.bench_function("graded_ring_dims/64", |b| b.iter(|| graded_ring_dims(black_box(64))));
    c.bench_function("ring_generators/8", |b| b.iter(|| ring_generators(black_box(8))));
}

fn surfaces(c: &mut Criterion) {
    let s = descend();
    c.bench_function("invariants/descend", |b| b.iter(|| black_box(&s).invariants()));
    let mut group = c.benchmark_group("invariants/largeK2");
    for k in [2, 10, 50] {
        let s = large_k2(k);
        group.bench_with_input(BenchmarkId::from_parameter(k), &s, |b, s| b.iter(|| s.invariants()));
    }
    group.finish();
}

criterion_group!(benches, cycles, ring, surfaces);
criterion_main!(benches);
