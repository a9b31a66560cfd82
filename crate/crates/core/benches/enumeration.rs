use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use powerkit_core::indices::{banzhaf_enumerated, shapley_shubik_enumerated};
use powerkit_core::rational::ratio;
use powerkit_core::solution::max_excess_exhaustive;
use powerkit_core::{Execution, VotingGame};

fn game(n: usize) -> VotingGame {
    let weights: Vec<u64> = (0..n as u64).map(|i| 1 + (i * 7) % 11).collect();
    let quota = weights.iter().sum::<u64>() * 2 / 3;
    VotingGame::from_integer_weights(format!("bench-{n}"), &weights, quota).unwrap()
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    for n in [16, 20] {
        let g = game(n);
        let x = vec![ratio(1, n as i64); n];
        for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(format!("ssi/{name}"), n), &g, |b, g| {
                b.iter(|| shapley_shubik_enumerated(black_box(g), exec).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("banzhaf/{name}"), n), &g, |b, g| {
                b.iter(|| banzhaf_enumerated(black_box(g), exec).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("max-excess/{name}"), n), &g, |b, g| {
                b.iter(|| max_excess_exhaustive(black_box(g), &x, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
