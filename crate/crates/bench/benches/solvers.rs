use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use psiflow::picard::KernelQuadrature;
use psiflow::verify::{verify_uniqueness, VerifySettings};
use psiflow::{picard_solve, rk_solve, PicardOptions, StepControl};
use psiflow_bench::classical_fixture;

fn kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_integrals");
    for n in [512usize, 2048, 8192] {
        let (_, grid) = classical_fixture(n);
        let quad = KernelQuadrature::new(&grid);
        let values: Vec<f64> = grid.nodes().iter().map(|r| r.ln().sqrt()).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &values, |b, v| {
            b.iter(|| quad.kernel_integrals(black_box(v)))
        });
    }
    group.finish();
}

fn picard(c: &mut Criterion) {
    let mut group = c.benchmark_group("picard_solve");
    for n in [512usize, 2048] {
        let (model, grid) = classical_fixture(n);
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| picard_solve(&model, 1.0, black_box(1.0), &grid, &PicardOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn rk(c: &mut Criterion) {
    let mut group = c.benchmark_group("rk_solve");
    let (model, grid) = classical_fixture(2048);
    for tol in [1e-8, 1e-10, 1e-12] {
        let ctrl = StepControl::for_span(1.0, 1.25, tol, tol).unwrap();
        group.bench_function(BenchmarkId::from_parameter(tol), |b| {
            b.iter(|| rk_solve(&model, 1.0, black_box(1.0), 1.25, &ctrl, &grid, false).unwrap())
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let (model, _) = classical_fixture(3);
    let settings = VerifySettings::default();
    c.bench_function("verify_uniqueness", |b| {
        b.iter(|| verify_uniqueness(&model, 1.0, black_box(1.0), &settings).unwrap())
    });
}

criterion_group!(benches, kernel, picard, rk, verify);
criterion_main!(benches);
