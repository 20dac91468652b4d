use iae_core::assembly::{assemble_direct, assemble_indirect, solve};
use iae_core::problem::{builtin_example1, load_problem, Function, IaeProblem, Kernel};
use iae_core::quadrature::gauss_rule;
use iae_core::solution::{problem_error, DEFAULT_GRID};
use iae_core::study::{best_approximation_study, convergence_study, QuadPolicy, StudyConfig};
use iae_core::{Execution, Method};

const N_LIST: [usize; 5] = [2, 4, 6, 8, 10];

fn errors(method: Method, n: usize, m: usize) -> (f64, f64) {
    let p = builtin_example1();
    let sol = solve(&p, n, &gauss_rule(m).unwrap(), method, Execution::default()).unwrap();
    let r = problem_error(&sol, &p, DEFAULT_GRID, Execution::default()).unwrap();
    (r.err_x, r.err_y)
}

fn within_factor(got: f64, want: f64, factor: f64) -> bool {
    got <= want * factor && got >= want / factor
}

#[test]
fn reference_table_cells() {
    // (method, n, quad order, err_x, err_y) reference values.
    let cells = [
        (Method::Direct, 10, 20, 7.6e-13, 1.4e-11),
        (Method::Direct, 2, 10, 4.0e-2, 1.6e-1),
        (Method::Direct, 8, 16, 9.4e-10, 1.4e-8),
        (Method::Indirect, 10, 20, 6.8e-13, 1.3e-12),
        (Method::Indirect, 4, 10, 2.6e-4, 5.1e-4),
        (Method::Indirect, 6, 12, 6.7e-7, 1.3e-6),
    ];
    for (method, n, m, wx, wy) in cells {
        let (ex, ey) = errors(method, n, m);
        assert!(within_factor(ex, wx, 3.0), "{method} n={n}: err_x {ex:e} vs {wx:e}");
        assert!(within_factor(ey, wy, 3.0), "{method} n={n}: err_y {ey:e} vs {wy:e}");
    }
}

#[test]
fn matched_quadrature_tightens_direct_y_errors() {
    // With m = n the direct y-errors land on the published values.
    let want_y = [1.6e-1, 2.2e-3, 8.1e-6, 1.4e-8, 1.4e-11];
    for (n, wy) in N_LIST.into_iter().zip(want_y) {
        let (_, ey) = errors(Method::Direct, n, QuadPolicy::Matched.order_for(n));
        assert!(within_factor(ey, wy, 1.25), "n={n}: {ey:e} vs {wy:e}");
    }
}

#[test]
fn monotone_decay_and_best_approximation_tracking() {
    let p = builtin_example1();
    let cfg = StudyConfig {
        methods: vec![Method::Direct, Method::Indirect],
        n_list: N_LIST.to_vec(),
        quad: QuadPolicy::Auto,
        grid: DEFAULT_GRID,
    };
    let reports = convergence_study(&p, &cfg, Execution::default()).unwrap();
    for chunk in reports.chunks(N_LIST.len()) {
        for w in chunk.windows(2) {
            assert!(w[1].err_x < w[0].err_x && w[1].err_y < w[0].err_y, "{w:?}");
        }
    }
    let sin = Function::parse("sin(t)").unwrap();
    let cos = Function::parse("cos(t)").unwrap();
    let bs = best_approximation_study(&sin, 1.0, &N_LIST, QuadPolicy::Auto, DEFAULT_GRID, Execution::default()).unwrap();
    let bc = best_approximation_study(&cos, 1.0, &N_LIST, QuadPolicy::Auto, DEFAULT_GRID, Execution::default()).unwrap();
    let indirect = &reports[N_LIST.len()..];
    for (k, r) in indirect.iter().enumerate() {
        assert_eq!(r.method, Method::Indirect);
        assert!(r.err_x <= 10.0 * bs[k]);
        assert!(r.err_y <= 10.0 * bc[k]);
    }
}

#[test]
fn direct_and_indirect_agree() {
    let p = builtin_example1();
    for n in N_LIST {
        let rule = gauss_rule(QuadPolicy::Auto.order_for(n)).unwrap();
        let d = assemble_direct(&p, n, &rule).unwrap().solve().unwrap();
        let i = assemble_indirect(&p, n, &rule).unwrap().solve().unwrap();
        let ed = problem_error(&d, &p, DEFAULT_GRID, Execution::default()).unwrap();
        let ei = problem_error(&i, &p, DEFAULT_GRID, Execution::default()).unwrap();
        let gap = (0..DEFAULT_GRID)
            .map(|k| {
                let t = k as f64 / (DEFAULT_GRID - 1) as f64;
                (d.evaluate(t).unwrap().0 - i.evaluate(t).unwrap().0).abs()
            })
            .fold(0.0, f64::max);
        assert!(gap <= ed.err_x + ei.err_x, "n={n}");
    }
}

#[test]
fn native_kernels_with_finite_difference_derivatives() {
    let p = IaeProblem::new(
        "native-example1",
        1.0,
        [
            Kernel::native(|t, s| s + t),
            Kernel::native(|t, s| s * s + t * t),
            Kernel::native(|t, s| s - t * t),
            Kernel::native(|t, s| s + t + 1.0),
        ],
        Function::native(|t| -t - 2.0 * t.sin() * t * t + 2.0 * t.sin()),
        Function::native(|t| {
            t * t - 2.0 * t.sin() + t.cos() * t - t.cos() * t * t + 1.0 - t.cos() - 2.0 * t.sin() * t
        }),
    )
    .unwrap()
    .with_exact(Function::native(f64::sin), Function::native(f64::cos))
    .with_fd_fallback(true);
    assert!(p.uses_fd_derivatives());
    let sol = solve(&p, 8, &gauss_rule(16).unwrap(), Method::Indirect, Execution::default()).unwrap();
    let r = problem_error(&sol, &p, DEFAULT_GRID, Execution::default()).unwrap();
    assert!(r.err_x < 2e-9 && r.err_y < 4e-9, "{r:?}");
}

#[test]
fn problem_file_end_to_end() {
    let dir = std::env::temp_dir().join(format!("iae-galerkin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("shifted.iae");
    // x = exp(t), y = 1 on [0, 2]: k11 = k12 = 0 gives f1 = exp(t);
    // k21 = 0, k22 = 1 + t + s gives f2 = -(3t²/2 + t).
    std::fs::write(
        &path,
        "name = shifted\nk11 = \"0\"\nk12 = \"0\"\nk21 = \"0\"\nk22 = \"1+t+s\"\n\
         f1 = \"exp(t)\"\nf2 = \"-(3*t^2/2+t)\"\nT = 2\nexact_x = \"exp(t)\"\nexact_y = \"1\"\n",
    )
    .unwrap();
    let p = load_problem(&path).unwrap();
    assert_eq!(p.horizon, 2.0);
    for method in [Method::Direct, Method::Indirect] {
        let sol = solve(&p, 10, &gauss_rule(20).unwrap(), method, Execution::default()).unwrap();
        let r = problem_error(&sol, &p, DEFAULT_GRID, Execution::default()).unwrap();
        assert!(r.err_x < 1e-8 && r.err_y < 1e-10, "{method}: {r:?}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
