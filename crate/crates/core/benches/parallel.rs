use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use minlen::algebra::DeformationParams;
use minlen::eigen::solve_q_space_with;
use minlen::models::{DisplacedOscillatorParams, Model};
use minlen::par::Execution;

fn model(beta: f64) -> Model {
    let d = DeformationParams::new(1.0, beta, 0.0).unwrap();
    Model::Displaced(DisplacedOscillatorParams::new(d, 1.0, 1.0, 0.5).unwrap())
}

fn q_space_levels(c: &mut Criterion) {
    let problem = model(0.1).transformed().unwrap();
    let mut g = c.benchmark_group("q_space_levels");
    for exec in [Execution::Sequential, Execution::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| solve_q_space_with(&problem, 2000, 16, exec).unwrap())
        });
    }
    g.finish();
}

fn beta_sweep(c: &mut Criterion) {
    let betas: Vec<f64> = (1..=16).map(|i| 0.05 * i as f64).collect();
    let mut g = c.benchmark_group("beta_sweep");
    g.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| {
                exec.try_map(&betas, |&beta| {
                    let p = model(beta).transformed()?;
                    solve_q_space_with(&p, 500, 8, Execution::Sequential)
                })
                .unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, q_space_levels, beta_sweep);
criterion_main!(benches);
