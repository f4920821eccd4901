use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use std::f64::consts::TAU;
use std::hint::black_box;

use lgbounds_core::search::{
    brute_force_oracle, monte_carlo_verify, random_instance, random_times, RandomInstanceConfig,
    TimeRange,
};
use lgbounds_core::spin::figure_data;
use lgbounds_core::{build_correlation_matrix, evaluate_schedule, Propagator, SweepGrid};

fn evolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve");
    for dim in [2, 4, 8] {
        let inst = random_instance(&RandomInstanceConfig::new(dim, 1), 0).unwrap();
        group.bench_with_input(BenchmarkId::new("propagator", dim), &inst, |b, inst| {
            let p = Propagator::new(&inst.hamiltonian).unwrap();
            b.iter(|| p.evolve(&inst.observable, black_box(0.7)).unwrap())
        });
    }
    group.finish();
}

fn correlation_matrix(c: &mut Criterion) {
    let inst = random_instance(&RandomInstanceConfig::new(4, 2), 0).unwrap();
    let p = Propagator::new(&inst.hamiltonian).unwrap();
    let ops: Vec<_> = [0.0, 0.4, 1.1, 2.3]
        .iter()
        .map(|&t| p.evolve(&inst.observable, t).unwrap())
        .collect();
    c.bench_function("correlation_matrix/dim4", |b| {
        b.iter(|| build_correlation_matrix(&inst.state, black_box(&ops)).unwrap())
    });
}

fn schedule(c: &mut Criterion) {
    let cfg = RandomInstanceConfig::new(3, 3);
    let inst = random_instance(&cfg, 0).unwrap();
    let t = random_times(cfg.seed, 0, TimeRange::new(0.0, TAU).unwrap());
    c.bench_function("evaluate_schedule/dim3", |b| {
        b.iter(|| evaluate_schedule(&inst.state, &inst.observable, &inst.hamiltonian, t).unwrap())
    });
}

fn figure(c: &mut Criterion) {
    let grid = SweepGrid::uniform(21, 0.0, TAU, 1.0).unwrap();
    c.bench_function("figure_data/21^3", |b| {
        b.iter(|| figure_data(black_box(&grid)))
    });
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo_verify");
    group.sample_size(10);
    let range = TimeRange::new(0.0, TAU).unwrap();
    for dim in [2, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(dim), &dim, |b, &dim| {
            b.iter_batched(
                || RandomInstanceConfig::new(dim, 42),
                |cfg| monte_carlo_verify(&cfg, 500, range).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let cfg = RandomInstanceConfig::new(3, 7);
    let inst = random_instance(&cfg, 0).unwrap();
    let t = random_times(cfg.seed, 0, TimeRange::new(0.0, TAU).unwrap());
    group.bench_function("dim3", |b| {
        b.iter(|| brute_force_oracle(&inst.state, &inst.observable, &inst.hamiltonian, t).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    evolution,
    correlation_matrix,
    schedule,
    figure,
    verification,
    oracle
);
criterion_main!(benches);
