//! `iae`: solve index-1 integral-algebraic equations by the direct and
//! indirect Galerkin methods and run convergence studies.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "iae", version, about = "Galerkin solvers for index-1 integral-algebraic equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem for a single basis size.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Indirect)]
        method: MethodArg,
        /// Number of basis functions.
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Error table over several basis sizes, with CSV and SVG output.
    Study {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long, default_value = "2,4,6,8,10")]
        n_list: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Max-norm error of the best approximation of f(t) in the basis.
    Bestapprox {
        /// Expression in t, e.g. "sin(t)".
        expr: String,
        #[arg(long, default_value = "2,4,6,8,10")]
        n_list: String,
        #[arg(long = "T", default_value_t = 1.0)]
        horizon: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long, default_value_t = iae_core::solution::DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Built-in problem name.
    #[arg(long, default_value = "example1", conflicts_with = "problem_file")]
    problem: String,
    /// Problem file (`key = value` lines).
    #[arg(long)]
    problem_file: Option<PathBuf>,
    /// Override the horizon T.
    #[arg(long = "T")]
    horizon: Option<f64>,
}

#[derive(Args, Debug)]
struct QuadArgs {
    /// Fixed number of Gauss points (default: max(2n, 10)).
    #[arg(long, conflicts_with = "matched_quad")]
    quad_order: Option<usize>,
    /// Use as many Gauss points as basis functions.
    #[arg(long = "paper-quad")]
    matched_quad: bool,
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[command(flatten)]
    quad: QuadArgs,
    /// Points of the equispaced grid used for max-norm errors.
    #[arg(long, default_value_t = iae_core::solution::DEFAULT_GRID)]
    grid: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    verbose: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Indirect,
    Both,
}

impl MethodArg {
    fn methods(self) -> Vec<iae_core::Method> {
        use iae_core::Method;
        match self {
            MethodArg::Direct => vec![Method::Direct],
            MethodArg::Indirect => vec![Method::Indirect],
            MethodArg::Both => vec![Method::Direct, Method::Indirect],
        }
    }
}

impl QuadArgs {
    fn policy(&self) -> iae_core::study::QuadPolicy {
        use iae_core::study::QuadPolicy;
        match (self.quad_order, self.matched_quad) {
            (Some(m), _) => QuadPolicy::Fixed(m),
            (None, true) => QuadPolicy::Matched,
            (None, false) => QuadPolicy::Auto,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve { problem, method, n, common } => commands::solve(&commands::SolveConfig {
            source: problem.into(),
            methods: method.methods(),
            n,
            quad: common.quad.policy(),
            grid: common.grid,
            csv: common.csv,
            verbose: common.verbose,
        }),
        Command::Study { problem, method, n_list, svg, common } => {
            commands::study(&commands::StudyArgs {
                source: problem.into(),
                methods: method.methods(),
                n_list,
                quad: common.quad.policy(),
                grid: common.grid,
                csv: common.csv,
                svg,
                verbose: common.verbose,
            })
        }
        Command::Bestapprox { expr, n_list, horizon, svg, quad, grid, csv, verbose } => {
            commands::bestapprox(&commands::BestApproxArgs {
                expr,
                n_list,
                horizon,
                quad: quad.policy(),
                grid,
                csv,
                svg,
                verbose,
            })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<ProblemArgs> for commands::ProblemSource {
    fn from(a: ProblemArgs) -> Self {
        commands::ProblemSource {
            builtin: a.problem,
            file: a.problem_file,
            horizon: a.horizon,
        }
    }
}
