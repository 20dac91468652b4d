use std::fmt;
use std::path::PathBuf;

use iae_core::assembly::assemble_with;
use iae_core::linalg::condition_estimate;
use iae_core::problem::{builtin, load_problem, Function, IaeProblem, BUILTIN_NAMES, VALIDATION_GRID};
use iae_core::quadrature::gauss_rule;
use iae_core::solution::{problem_error, GalerkinSolution};
use iae_core::study::{best_approximation_study, convergence_study, parse_n_list, QuadPolicy, StudyConfig};
use iae_core::{Execution, Method};

use crate::output;

#[derive(Debug)]
pub enum CliError {
    /// Bad input, failed validation or a failed solve.
    Domain(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<iae_core::Error> for CliError {
    fn from(e: iae_core::Error) -> Self {
        match e {
            iae_core::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub struct ProblemSource {
    pub builtin: String,
    pub file: Option<PathBuf>,
    pub horizon: Option<f64>,
}

pub struct SolveConfig {
    pub source: ProblemSource,
    pub methods: Vec<Method>,
    pub n: usize,
    pub quad: QuadPolicy,
    pub grid: usize,
    pub csv: Option<PathBuf>,
    pub verbose: bool,
}

pub struct StudyArgs {
    pub source: ProblemSource,
    pub methods: Vec<Method>,
    pub n_list: String,
    pub quad: QuadPolicy,
    pub grid: usize,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub verbose: bool,
}

pub struct BestApproxArgs {
    pub expr: String,
    pub n_list: String,
    pub horizon: f64,
    pub quad: QuadPolicy,
    pub grid: usize,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub verbose: bool,
}

fn load(src: &ProblemSource, verbose: bool) -> CliResult<IaeProblem> {
    let mut p = match &src.file {
        Some(path) => match load_problem(path) {
            Ok(p) => p,
            Err(iae_core::Error::Io(e)) => {
                return Err(CliError::Io(format!("cannot read {}: {e}", path.display())))
            }
            Err(e) => return Err(e.into()),
        },
        None => builtin(&src.builtin).ok_or_else(|| {
            CliError::Domain(format!(
                "unknown problem '{}' (built-in problems: {})",
                src.builtin,
                BUILTIN_NAMES.join(", ")
            ))
        })?,
    };
    if let Some(h) = src.horizon {
        p = p.with_horizon(h)?;
    }
    let k0 = p.validate_index1(VALIDATION_GRID)?;
    if verbose {
        eprintln!("problem '{}' on [0, {}], k0 = min |k22(t,t)| = {k0:.6e}", p.name, p.horizon);
    }
    if p.uses_fd_derivatives() {
        eprintln!(
            "warning: derivatives come from finite differences; indirect-method accuracy saturates near 1e-9"
        );
    }
    Ok(p)
}

fn check_fixed_order(quad: QuadPolicy, max_n: usize) -> CliResult<()> {
    match quad {
        QuadPolicy::Fixed(0) => Err(CliError::Domain("quadrature order must be positive".into())),
        QuadPolicy::Fixed(m) if m < max_n => Err(CliError::Domain(format!(
            "quadrature order {m} is below the basis size {max_n}"
        ))),
        _ => Ok(()),
    }
}

fn check_grid(grid: usize) -> CliResult<()> {
    if grid < 2 {
        return Err(CliError::Domain("--grid needs at least 2 points".into()));
    }
    Ok(())
}

pub fn solve(cfg: &SolveConfig) -> CliResult<()> {
    if cfg.n == 0 {
        return Err(CliError::Domain("--n must be at least 1".into()));
    }
    check_fixed_order(cfg.quad, cfg.n)?;
    check_grid(cfg.grid)?;
    let p = load(&cfg.source, cfg.verbose)?;
    let m = cfg.quad.order_for(cfg.n);
    let rule = gauss_rule(m)?;
    let exec = Execution::default();

    let mut solutions: Vec<GalerkinSolution> = Vec::new();
    for &method in &cfg.methods {
        let system = assemble_with(&p, cfg.n, &rule, method, exec)?;
        if cfg.verbose {
            match condition_estimate(&system.matrix) {
                Ok(c) => eprintln!("{method}: condition estimate {c:.3e}"),
                Err(e) => eprintln!("{method}: condition estimate unavailable ({e})"),
            }
        }
        let sol = system.solve()?;
        println!("{method} Galerkin method, problem '{}', T = {}, n = {}, quadrature order {m}", p.name, p.horizon, cfg.n);
        println!("{}", output::coefficient_table(&sol));
        if p.exact_x.is_some() && p.exact_y.is_some() {
            let r = problem_error(&sol, &p, cfg.grid, exec)?;
            println!("|x_n - x| = {:.3e}", r.err_x);
            println!("|y_n - y| = {:.3e}", r.err_y);
        }
        println!();
        solutions.push(sol);
    }
    if let Some(path) = &cfg.csv {
        output::write_solution_csv(path, &p, &solutions, cfg.grid)?;
    }
    Ok(())
}

pub fn study(args: &StudyArgs) -> CliResult<()> {
    let n_list = parse_n_list(&args.n_list)?;
    check_fixed_order(args.quad, *n_list.last().expect("nonempty"))?;
    check_grid(args.grid)?;
    let p = load(&args.source, args.verbose)?;
    let cfg = StudyConfig {
        methods: args.methods.clone(),
        n_list,
        quad: args.quad,
        grid: args.grid,
    };
    let reports = convergence_study(&p, &cfg, Execution::default())?;
    for (k, &method) in cfg.methods.iter().enumerate() {
        let rows = &reports[k * cfg.n_list.len()..(k + 1) * cfg.n_list.len()];
        println!("{method} Galerkin method, problem '{}', quadrature {}", p.name, cfg.quad);
        println!("{}", output::error_table(rows));
    }
    if let Some(path) = &args.csv {
        output::write_study_csv(path, &reports)?;
    }
    if let Some(path) = &args.svg {
        let series = output::study_series(&reports, &cfg.methods);
        let title = format!("log10 max-norm error, problem '{}'", p.name);
        output::write_svg(path, &title, &series)?;
    }
    Ok(())
}

pub fn bestapprox(args: &BestApproxArgs) -> CliResult<()> {
    let n_list = parse_n_list(&args.n_list)?;
    check_fixed_order(args.quad, *n_list.last().expect("nonempty"))?;
    check_grid(args.grid)?;
    let f = Function::parse(&args.expr)?;
    let errors = best_approximation_study(&f, args.horizon, &n_list, args.quad, args.grid, Execution::default())?;
    if args.verbose {
        eprintln!("f(t) = {}, T = {}, grid {}", args.expr, args.horizon, args.grid);
    }
    println!("best approximation of {} on [0, {}]", args.expr, args.horizon);
    println!("{}", output::best_table(&n_list, &errors));
    if let Some(path) = &args.csv {
        output::write_best_csv(path, &n_list, &errors)?;
    }
    if let Some(path) = &args.svg {
        let series = vec![output::Series {
            label: format!("|P_n f - f|, f = {}", args.expr),
            points: n_list.iter().copied().zip(errors.iter().copied()).collect(),
        }];
        output::write_svg(path, "log10 best-approximation error", &series)?;
    }
    Ok(())
}
