use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curvelog::curve::ClassLetter;
use curvelog::hyperlog::eval_points;
use curvelog::iterint::IntegratorConfig;
use curvelog::par::Execution;
use curvelog::random;
use curvelog::reduce::normal_forms;
use curvelog::{Curve, Word};
use num_complex::Complex64;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn hyperlog_grid(c: &mut Criterion) {
    let curve = Curve::from_ints(&[0, 1]).unwrap();
    let w = Word(vec![ClassLetter(1), ClassLetter(0), ClassLetter(0), ClassLetter(1)]);
    let points: Vec<Complex64> = (0..64)
        .map(|k| Complex64::from_polar(0.3 + 0.02 * k as f64, 0.1 * k as f64))
        .collect();
    let cfg = IntegratorConfig::default();
    let mut g = c.benchmark_group("hyperlog_grid");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| eval_points(&curve, &w, black_box(&points), &cfg, mode).unwrap())
        });
    }
    g.finish();
}

fn reduction_batch(c: &mut Criterion) {
    let curve = Curve::from_ints(&[0, 1]).unwrap();
    let mut r = random::rng(11);
    let sigma = random::section(&mut r, &curve);
    let tensors: Vec<_> = (0..32).map(|_| random::form_tensor(&mut r, &curve, 3, 3)).collect();
    let x0 = curve.default_basepoint();
    let mut g = c.benchmark_group("normal_forms");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| normal_forms(black_box(&tensors), &sigma, &x0, mode).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, hyperlog_grid, reduction_batch);
criterion_main!(benches);
