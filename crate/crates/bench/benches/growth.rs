use criterion::{criterion_group, criterion_main, Criterion};
use rotorlab_bench::nesw_aggregate;
use rotorlab_core::engine::{df_relax, idla, Mover, Schedule};
use rotorlab_core::lattice::Point;
use rotorlab_core::rotors::RotorPolicy;
use std::hint::black_box;

fn bench_growth(c: &mut Criterion) {
    let mut g = c.benchmark_group("growth");
    g.sample_size(10);

    g.bench_function("aggregate_nesw_20k", |b| {
        b.iter(|| black_box(nesw_aggregate(20_000)))
    });

    g.bench_function("aggregate_cyclic_d3_5k", |b| {
        let policy = RotorPolicy::default_cyclic(3);
        b.iter(|| {
            black_box(rotorlab_core::engine::aggregate(5_000, &policy, None).unwrap())
        })
    });

    g.bench_function("idla_2d_10k", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            black_box(idla(10_000, 2, seed))
        })
    });

    g.bench_function("df_relax_rotor_200", |b| {
        let initial = vec![Point::origin(2); 200];
        let mover = Mover::Rotor(RotorPolicy::nesw());
        b.iter(|| black_box(df_relax(&initial, &Schedule::HighestLabel, &mover)))
    });

    g.finish();
}

criterion_group!(benches, bench_growth);
criterion_main!(benches);
