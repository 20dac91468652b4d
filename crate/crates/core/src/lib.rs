//! Galerkin solvers for linear integral-algebraic equations of index 1:
//!
//! ```text
//! x(t) = f1(t) + ∫_0^t k11(t,s) x(s) + k12(t,s) y(s) ds
//!    0 = f2(t) + ∫_0^t k21(t,s) x(s) + k22(t,s) y(s) ds
//! ```
//!
//! Both unknowns are expanded in an orthonormal shifted-Legendre basis on
//! `[0, T]`. The *direct* method projects the two equations as written; the
//! *indirect* method first differentiates the constraint into a
//! second-kind Volterra equation for `y` and projects that instead.
//!
//! ```
//! use iae_core::{assembly, problem, quadrature, solution, Execution, Method};
//!
//! let p = problem::builtin_example1();
//! let rule = quadrature::gauss_rule(16).unwrap();
//! let sol = assembly::solve(&p, 8, &rule, Method::Indirect, Execution::default()).unwrap();
//! let report = solution::problem_error(&sol, &p, 1001, Execution::default()).unwrap();
//! assert!(report.err_x < 1e-8);
//! ```

pub mod assembly;
pub mod basis;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod par;
pub mod problem;
pub mod quadrature;
pub mod solution;
pub mod study;

pub use assembly::{GalerkinSystem, Method};
pub use basis::Basis;
pub use error::{Error, ParseError, Result};
pub use par::Execution;
pub use problem::IaeProblem;
pub use quadrature::QuadRule;
pub use solution::{ErrorReport, GalerkinSolution};
