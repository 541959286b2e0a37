use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use greedymatch::{
    check_trace, optimal_matching, sequential_greedy, simulate, SchedulerPolicy, SimConfig,
};
use greedymatch_bench::{dense, sparse};

fn bench_sequential(c: &mut Criterion) {
    let mut group = c.benchmark_group("sequential_greedy");
    for n in [50usize, 200, 800] {
        let g = sparse(n);
        group.bench_with_input(BenchmarkId::new("sparse", n), &g, |b, g| {
            b.iter(|| sequential_greedy(black_box(g)))
        });
    }
    group.finish();
}

fn bench_simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    let g = dense(60);
    for policy in SchedulerPolicy::ALL {
        group.bench_with_input(
            BenchmarkId::new("dense60", policy),
            &policy,
            |b, &policy| {
                b.iter(|| simulate(black_box(&g), &SimConfig::new(policy, 7)).unwrap())
            },
        );
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimal_matching");
    for n in [8usize, 12, 16] {
        let g = dense(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| optimal_matching(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn bench_check(c: &mut Criterion) {
    let g = dense(60);
    let run = simulate(&g, &SimConfig::new(SchedulerPolicy::Random, 7)).unwrap();
    c.bench_function("check_trace/dense60", |b| {
        b.iter(|| check_trace(black_box(&g), black_box(&run.trace)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_sequential,
    bench_simulate,
    bench_oracle,
    bench_check
);
criterion_main!(benches);
