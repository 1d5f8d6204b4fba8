use std::hint::black_box;

use besovlab::sampler::{simulate_norm_curve, SimulationConfig, SimulationModel};
use besovlab::stable::StableRun;
use besovlab::{BesovParams, Execution, IndexEnumeration, Truncation};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn sphere_engine(c: &mut Criterion) {
    let params = BesovParams::new(3.0, -1.0, -1.0, 1).unwrap();
    let en = IndexEnumeration::new(1, Truncation::dyadic(14, 1)).unwrap();
    let mut group = c.benchmark_group("sphere_statistics");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        let run = StableRun::new(1.2, params, en, 1 << 12)
            .unwrap()
            .with_samples(4096)
            .with_execution(exec);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &run,
            |b, run| b.iter(|| black_box(run.sphere_statistics().unwrap())),
        );
    }
    group.finish();
}

fn norm_curve(c: &mut Criterion) {
    let params = BesovParams::new(3.0, -1.0, -1.0, 1).unwrap();
    let grid: Vec<usize> = (0..=12).map(|i| 1usize << i).collect();
    let mut group = c.benchmark_group("simulate_norm_curve");
    group.sample_size(10);
    for exec in [Execution::Sequential, Execution::Parallel] {
        let cfg = SimulationConfig {
            params,
            enumeration: IndexEnumeration::new(1, Truncation::dyadic(14, 1)).unwrap(),
            grid: grid.clone(),
            replicas: 128,
            seed: 1,
            execution: exec,
        };
        let model = SimulationModel::CanonicalStable { alpha: 1.2 };
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &cfg,
            |b, cfg| b.iter(|| black_box(simulate_norm_curve(&model, cfg).unwrap())),
        );
    }
    group.finish();
}

criterion_group!(benches, sphere_engine, norm_curve);
criterion_main!(benches);
