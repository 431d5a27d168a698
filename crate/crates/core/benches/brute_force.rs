//! Head-to-head timings for the brute-force enumerations, parallel
//! dispatch vs the always-available sequential loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ckern_core::finrel::{all_pers, all_pers_seq, AbelianGroupoid};

fn wide_groupoid(copies: usize) -> AbelianGroupoid {
    let mut g = AbelianGroupoid::cyclic(2);
    for _ in 1..copies {
        g = AbelianGroupoid::disjoint_union(&g, &AbelianGroupoid::cyclic(2));
    }
    g
}

fn bench_copyable_subsets(c: &mut Criterion) {
    let mut group = c.benchmark_group("copyable_subsets");
    for copies in [4usize, 6, 8] {
        let g = wide_groupoid(copies);
        group.bench_with_input(BenchmarkId::new("parallel", copies), &g, |b, g| {
            b.iter(|| black_box(g.copyable_subsets()))
        });
        group.bench_with_input(BenchmarkId::new("sequential", copies), &g, |b, g| {
            b.iter(|| black_box(g.copyable_subsets_seq()))
        });
    }
    group.finish();
}

fn bench_all_pers(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_pers");
    group.sample_size(10);
    for n in [3usize, 4] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| black_box(all_pers(n)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| black_box(all_pers_seq(n)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_copyable_subsets, bench_all_pers);
criterion_main!(benches);
