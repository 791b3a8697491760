use criterion::{criterion_group, criterion_main, Criterion};
use rotorlab_bench::{ball_2d, nesw_aggregate};
use rotorlab_core::exittime::solve_exit;
use rotorlab_core::montecarlo::{estimate_orthant_survival, StartSet};
use rotorlab_core::shape::lebesgue_error;
use std::hint::black_box;

fn bench_solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("solvers");
    g.sample_size(10);

    let ball = ball_2d(2_000);
    g.bench_function("solve_exit_ball_2k", |b| {
        b.iter(|| black_box(solve_exit(&ball, 1e-10).unwrap()))
    });

    let agg = nesw_aggregate(5_000);
    g.bench_function("solve_exit_aggregate_5k", |b| {
        b.iter(|| black_box(solve_exit(agg.region(), 1e-10).unwrap()))
    });

    g.bench_function("lebesgue_error_10k", |b| {
        let ball = ball_2d(10_000);
        let n = ball.len() as u64;
        b.iter(|| black_box(lebesgue_error(&ball, n, 1e-6)))
    });

    g.bench_function("orthant_survival_k2_r27", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            black_box(estimate_orthant_survival(2, 27, 2, 10_000, seed, StartSet::Corners))
        })
    });

    g.finish();
}

criterion_group!(benches, bench_solvers);
criterion_main!(benches);
