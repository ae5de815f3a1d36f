use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use jumpexec_bench::table1_acquisition;
use jumpexec_core::hjb::{solve_surface, solve_tridiagonal, Grid};
use jumpexec_core::microstructure::sample_hawkes_events;
use jumpexec_core::rng::{stream, Lane};
use jumpexec_core::strategy::{run_batch, run_strategy_path};
use jumpexec_core::{HawkesParams, Lookup};

fn bench_solver(c: &mut Criterion) {
    let config = table1_acquisition();
    let grid = Grid::new(&config, 390, 1000).unwrap();
    c.bench_function("solve_surface 390x1000", |b| {
        b.iter(|| solve_surface(black_box(&config), black_box(&grid)).unwrap())
    });

    let n = 1000;
    let lower = vec![-0.1; n];
    let diag = vec![1.3; n];
    let upper = vec![-0.1; n];
    let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
    let mut x = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    c.bench_function("tridiagonal 1000", |b| {
        b.iter(|| {
            solve_tridiagonal(&lower, &diag, &upper, black_box(&rhs), &mut x, &mut scratch).unwrap()
        })
    });
}

fn bench_strategy(c: &mut Criterion) {
    let config = table1_acquisition();
    let grid = Grid::new(&config, 390, 1000).unwrap();
    let surface = solve_surface(&config, &grid).unwrap();
    c.bench_function("run_strategy_path", |b| {
        let mut id = 0u64;
        b.iter(|| {
            id += 1;
            run_strategy_path(&surface, &config, id, 1, Lookup::Nearest).unwrap()
        })
    });
    let mut group = c.benchmark_group("run_batch");
    group.sample_size(10);
    group.throughput(Throughput::Elements(1000));
    group.bench_function("1000 paths", |b| {
        b.iter(|| run_batch(&surface, &config, 1000, black_box(7), Lookup::Nearest).unwrap())
    });
    group.finish();
}

fn bench_hawkes(c: &mut Criterion) {
    let params = HawkesParams::with_branching_ratio(1.0, 0.5).unwrap();
    let mut group = c.benchmark_group("hawkes");
    // About 2 * horizon events per sample.
    group.throughput(Throughput::Elements(20_000));
    let mut path = 0u64;
    group.bench_function("ogata horizon 1e4", |b| {
        b.iter_batched(
            || {
                path += 1;
                stream(3, path, Lane::Events)
            },
            |mut rng| sample_hawkes_events(&params, 1e4, &mut rng),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_solver, bench_strategy, bench_hawkes);
criterion_main!(benches);
