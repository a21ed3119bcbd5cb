use criterion::{criterion_group, criterion_main, Criterion};
use nccalc_core::algebra::AlgebraId;
use nccalc_core::{curvature, expr, models, oracle, solve_connection};
use std::hint::black_box;

fn bench_pipeline(c: &mut Criterion) {
    let calc = models::sphere_calculus().unwrap();
    let p = models::pseudo_inverse(&calc).unwrap();
    let conn = solve_connection(&calc, &p).unwrap();
    let table = curvature::components(&conn, calc.form());

    c.bench_function("sphere/solve_connection", |b| b.iter(|| solve_connection(black_box(&calc), &p).unwrap()));
    c.bench_function("sphere/curvature_components", |b| b.iter(|| curvature::components(black_box(&conn), calc.form())));
    c.bench_function("sphere/symmetry_suite", |b| b.iter(|| curvature::symmetry_suite(black_box(&table))));
    c.bench_function("sphere/scalar_curvature", |b| b.iter(|| curvature::scalar_curvature(black_box(&table), &p).unwrap()));
}

fn bench_algebra(c: &mut Criterion) {
    let a = expr::parse_element("(Z + q*W + Ws*Zs)^4", AlgebraId::Sphere).unwrap();
    c.bench_function("sphere/normal_form_square", |b| b.iter(|| black_box(&a) * black_box(&a)));

    let rep = oracle::MatrixRep::sphere(2, 7, 1.0 / 3.0).unwrap();
    c.bench_function("oracle/evaluate", |b| b.iter(|| oracle::evaluate(black_box(&a), &rep).unwrap()));
}

criterion_group!(benches, bench_pipeline, bench_algebra);
criterion_main!(benches);
