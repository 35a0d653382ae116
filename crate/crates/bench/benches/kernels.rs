use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kicknm_bench::{coherent, integrable_pair};
use kicknm_core::fidelity_series;
use kicknm_core::numerics::unitary_eig;
use kicknm_core::spectral::{build_sector, sector_matrix};

fn apply_floquet(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_floquet");
    for n in [8usize, 10, 12, 14] {
        let op = integrable_pair(n).plus;
        let mut amps = coherent(n).into_inner();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| op.apply_in_place(black_box(&mut amps)).unwrap())
        });
    }
    group.finish();
}

fn fidelity(c: &mut Criterion) {
    let mut group = c.benchmark_group("fidelity_series_t1000");
    group.sample_size(10);
    for n in [8usize, 10] {
        let pair = integrable_pair(n);
        let psi = coherent(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| fidelity_series(&pair, black_box(&psi), 1000).unwrap())
        });
    }
    group.finish();
}

fn sector_diagonalization(c: &mut Criterion) {
    let mut group = c.benchmark_group("sector_k0_eig");
    group.sample_size(10);
    for n in [8usize, 10, 12] {
        let op = integrable_pair(n).plus;
        let basis = build_sector(n, 0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| unitary_eig(&sector_matrix(&op, &basis).unwrap()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, apply_floquet, fidelity, sector_diagonalization);
criterion_main!(benches);
