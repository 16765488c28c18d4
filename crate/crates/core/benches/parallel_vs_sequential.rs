use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use schmidt_core::discretize::{build_grid, sample_state_with, shannon_mi_numeric_with, DEFAULT_SPAN};
use schmidt_core::epr_sim::{run_coincidence_experiment_with, SPECTRUM_TAIL};
use schmidt_core::gaussian_model::{GaussianParams, GeometricSpectrum};
use schmidt_core::{Execution, LogBase};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn params() -> GaussianParams {
    GaussianParams::new(1.0, -1.0, 2.0, 1.0, 0.9).unwrap()
}

fn sampling(c: &mut Criterion) {
    let p = params();
    let mut group = c.benchmark_group("sample_state");
    for n in [100usize, 400] {
        let grid = build_grid(&p, n, DEFAULT_SPAN).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &grid, |b, g| {
                b.iter(|| sample_state_with(|x1, x2| p.wavefunction(x1, x2), black_box(g), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn mutual_information(c: &mut Criterion) {
    let p = params();
    let mut group = c.benchmark_group("shannon_mi_numeric");
    for n in [200usize, 800] {
        let grid = build_grid(&p, n, 8.0).unwrap();
        let joint =
            sample_state_with(|x1, x2| p.wavefunction(x1, x2), &grid, Execution::Parallel).unwrap().probabilities();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &joint, |b, j| {
                b.iter(|| shannon_mi_numeric_with(black_box(j), LogBase::E, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn coincidences(c: &mut Criterion) {
    let weights = GeometricSpectrum::from_rho(0.9).unwrap().truncated(SPECTRUM_TAIL);
    let mut group = c.benchmark_group("coincidence_experiment");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 200_000), |b| {
            b.iter(|| run_coincidence_experiment_with(black_box(&weights), 3, 200_000, 7, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sampling, mutual_information, coincidences);
criterion_main!(benches);
