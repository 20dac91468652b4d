use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use iae_core::assembly::assemble_with;
use iae_core::problem::builtin_example1;
use iae_core::quadrature::gauss_rule;
use iae_core::solution::{problem_error, DEFAULT_GRID};
use iae_core::study::{convergence_study, QuadPolicy, StudyConfig};
use iae_core::{Execution, Method};

const POLICIES: [(&str, Execution); 2] =
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn assembly(c: &mut Criterion) {
    let p = builtin_example1();
    for method in [Method::Direct, Method::Indirect] {
        let mut group = c.benchmark_group(format!("assemble_{method}"));
        group.sample_size(20);
        for n in [6, 10, 16] {
            let rule = gauss_rule(QuadPolicy::Auto.order_for(n)).unwrap();
            for (label, exec) in POLICIES {
                group.bench_with_input(BenchmarkId::new(label, n), &n, |b, &n| {
                    b.iter(|| assemble_with(black_box(&p), n, &rule, method, exec).unwrap())
                });
            }
        }
        group.finish();
    }
}

fn error_grid(c: &mut Criterion) {
    let p = builtin_example1();
    let rule = gauss_rule(20).unwrap();
    let sol = assemble_with(&p, 10, &rule, Method::Indirect, Execution::Sequential)
        .unwrap()
        .solve()
        .unwrap();
    let mut group = c.benchmark_group("max_norm_error");
    for grid in [DEFAULT_GRID, 20_001] {
        for (label, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(label, grid), &grid, |b, &grid| {
                b.iter(|| problem_error(black_box(&sol), &p, grid, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn study(c: &mut Criterion) {
    let p = builtin_example1();
    let cfg = StudyConfig {
        methods: vec![Method::Direct, Method::Indirect],
        n_list: vec![2, 4, 6, 8, 10],
        quad: QuadPolicy::Auto,
        grid: DEFAULT_GRID,
    };
    let mut group = c.benchmark_group("convergence_study");
    group.sample_size(10);
    for (label, exec) in POLICIES {
        group.bench_function(label, |b| {
            b.iter(|| convergence_study(black_box(&p), &cfg, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, assembly, error_grid, study);
criterion_main!(benches);
