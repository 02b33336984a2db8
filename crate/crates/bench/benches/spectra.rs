use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use salpeter_core::operators::{kinetic_matrix, potential_matrix};
use salpeter_core::spectra::{binding_table, solve};
use salpeter_core::{MassConfig, PotentialSpec, Sector, TrialBasis};

const COLUMNS: [(f64, f64); 3] = [(0.5, 0.5), (1.0, -1.0), (1.0, -2.0)];

const SECTORS: [Sector; 6] = [
    Sector::new(0, 0),
    Sector::new(0, 1),
    Sector::new(0, 2),
    Sector::new(1, 0),
    Sector::new(1, 1),
    Sector::new(2, 0),
];

fn kinetic_assembly(c: &mut Criterion) {
    let masses = MassConfig::equal(1.0).unwrap();
    let mut group = c.benchmark_group("kinetic_matrix");
    for d in [8usize, 16, 32] {
        let basis = TrialBasis::new(0, 1.0, 1.0, d).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &basis, |b, basis| {
            b.iter(|| kinetic_matrix(black_box(basis), &masses).unwrap())
        });
    }
    group.finish();

    let basis = TrialBasis::new(0, 1.0, 1.0, 32).unwrap();
    let spec = PotentialSpec::hellmann(1.0, -1.0, 1.0).unwrap();
    c.bench_function("potential_matrix/32", |b| b.iter(|| potential_matrix(black_box(&basis), &spec).unwrap()));
}

fn ritz_solve(c: &mut Criterion) {
    let masses = MassConfig::equal(1.0).unwrap();
    let spec = PotentialSpec::hellmann(1.0, -1.0, 1.0).unwrap();
    let basis = TrialBasis::new(0, 1.0, 1.0, 32).unwrap();
    c.bench_function("solve/d32", |b| b.iter(|| solve(black_box(&basis), &masses, &spec, 3).unwrap()));

    let general = TrialBasis::new(0, 0.8, 1.0, 8).unwrap();
    c.bench_function("solve/d8_beta0.8", |b| b.iter(|| solve(black_box(&general), &masses, &spec, 1).unwrap()));
}

fn reference_table(c: &mut Criterion) {
    let masses = MassConfig::equal(1.0).unwrap();
    let specs: Vec<PotentialSpec> =
        COLUMNS.iter().map(|&(k, u)| PotentialSpec::hellmann(k, u, 1.0).unwrap()).collect();
    let mut group = c.benchmark_group("table");
    group.sample_size(10);
    group.bench_function("three_columns_d32", |b| {
        b.iter(|| {
            for spec in &specs {
                black_box(binding_table(&masses, spec, 1.0, 1.0, 32, &SECTORS).unwrap());
            }
        })
    });
    group.finish();
}

criterion_group!(benches, kinetic_assembly, ritz_solve, reference_table);
criterion_main!(benches);
