use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use loja::domain::Domain;
use loja::fixtures::{ex4_9, prop6_circle};
use loja::geometry::{hausdorff_with, PointSet};
use loja::lojafit::PairSample;
use loja::medial::medial_axis_with;
use loja::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ring(n: usize, r: f64) -> PointSet {
    let pts = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    PointSet::with_tol(2, pts, 0.0).unwrap()
}

fn bench_hausdorff(c: &mut Criterion) {
    let (a, b) = (ring(4000, 1.0), ring(3000, 1.5));
    let mut g = c.benchmark_group("hausdorff");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &e| {
            bench.iter(|| hausdorff_with(black_box(&a), black_box(&b), e).unwrap())
        });
    }
    g.finish();
}

fn bench_evaluate(c: &mut Criterion) {
    let pair = ex4_9(12).unwrap();
    let mut g = c.benchmark_group("pair_evaluate");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &e| {
            bench.iter(|| PairSample::evaluate(&pair.f, &pair.g, &pair.domain, black_box(50_000), 42, e).unwrap())
        });
    }
    g.finish();
}

fn bench_medial(c: &mut Criterion) {
    let x = prop6_circle(512).unwrap();
    let d = Domain::new(vec![-0.9, -0.9], vec![0.9, 0.9]).unwrap();
    let tol = x.default_tol_med();
    let mut g = c.benchmark_group("medial_axis");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |bench, &e| {
            bench.iter(|| medial_axis_with(&x, &d, black_box(41 * 41), 0, tol, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_hausdorff, bench_evaluate, bench_medial);
criterion_main!(benches);
