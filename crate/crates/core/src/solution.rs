//! Galerkin solutions, L² projections onto the basis and max-norm errors.

use crate::assembly::Method;
use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::par::{try_map_indices, Execution};
use crate::problem::{Function, IaeProblem};
use crate::quadrature::{try_integrate_interval, QuadRule};

/// Default number of equispaced points for max-norm errors.
pub const DEFAULT_GRID: usize = 1001;

#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinSolution {
    pub coeff_x: Vec<f64>,
    pub coeff_y: Vec<f64>,
    pub basis: Basis,
    pub method: Method,
}

impl GalerkinSolution {
    pub fn new(coeff_x: Vec<f64>, coeff_y: Vec<f64>, basis: Basis, method: Method) -> Result<Self> {
        if coeff_x.len() != basis.len() || coeff_y.len() != basis.len() {
            return Err(Error::Dimension(format!(
                "coefficient lengths {}/{} do not match basis size {}",
                coeff_x.len(),
                coeff_y.len(),
                basis.len()
            )));
        }
        if coeff_x.iter().chain(&coeff_y).any(|c| !c.is_finite()) {
            return Err(Error::Domain("non-finite Galerkin coefficient".into()));
        }
        Ok(GalerkinSolution { coeff_x, coeff_y, basis, method })
    }

    pub fn n(&self) -> usize {
        self.basis.len()
    }

    /// `(x_n(t), y_n(t))`.
    pub fn evaluate(&self, t: f64) -> Result<(f64, f64)> {
        let t = self.basis.check_point(t)?;
        Ok(self.evaluate_unchecked(t))
    }

    fn evaluate_unchecked(&self, t: f64) -> (f64, f64) {
        let v = self.basis.eval_all_unchecked(t);
        let dot = |c: &[f64]| -> f64 { v.iter().zip(c).map(|(a, b)| a * b).sum() };
        (dot(&self.coeff_x), dot(&self.coeff_y))
    }
}

/// Max-norm errors of one solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub method: Method,
    pub err_x: f64,
    pub err_y: f64,
    pub grid: usize,
}

fn check_rule(basis: &Basis, rule: &QuadRule) -> Result<()> {
    if rule.order() < basis.len() + 2 {
        return Err(Error::InvalidArgument(format!(
            "projection onto {} basis functions needs a rule of at least {} points, got {}",
            basis.len(),
            basis.len() + 2,
            rule.order()
        )));
    }
    Ok(())
}

/// Coefficients `c_i = ∫_0^T f V_i dt` of the orthogonal projection.
pub fn project<F>(f: F, basis: &Basis, rule: &QuadRule) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    try_project(|t| Ok(f(t)), basis, rule)
}

pub fn try_project<F>(f: F, basis: &Basis, rule: &QuadRule) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    check_rule(basis, rule)?;
    (0..basis.len())
        .map(|i| {
            try_integrate_interval(
                |t| Ok(f(t)? * basis.eval_unchecked(i, t)),
                basis.horizon(),
                rule,
            )
        })
        .collect()
}

fn grid_points(horizon: f64, grid: usize) -> Result<impl Fn(usize) -> f64> {
    if grid < 2 {
        return Err(Error::InvalidArgument("error grid needs at least 2 points".into()));
    }
    let step = horizon / (grid - 1) as f64;
    Ok(move |k: usize| if k + 1 == grid { horizon } else { k as f64 * step })
}

/// Max over an equispaced grid (endpoints included) of `|g(t)|`.
pub fn grid_max<F>(horizon: f64, grid: usize, exec: Execution, g: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Send + Sync,
{
    let at = grid_points(horizon, grid)?;
    let values = try_map_indices(exec, grid, |k| g(at(k)).map(f64::abs))?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

pub fn max_norm_error(
    sol: &GalerkinSolution,
    exact_x: &Function,
    exact_y: &Function,
    grid: usize,
    exec: Execution,
) -> Result<ErrorReport> {
    let at = grid_points(sol.basis.horizon(), grid)?;
    let pairs = try_map_indices(exec, grid, |k| {
        let t = at(k);
        let (x, y) = sol.evaluate_unchecked(t);
        Ok::<_, Error>(((x - exact_x.eval(t)?).abs(), (y - exact_y.eval(t)?).abs()))
    })?;
    let (err_x, err_y) = pairs
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (f64::max(a, x), f64::max(b, y)));
    Ok(ErrorReport { n: sol.n(), method: sol.method, err_x, err_y, grid })
}

/// Errors against the problem's exact solution.
pub fn problem_error(
    sol: &GalerkinSolution,
    p: &IaeProblem,
    grid: usize,
    exec: Execution,
) -> Result<ErrorReport> {
    match (&p.exact_x, &p.exact_y) {
        (Some(x), Some(y)) => max_norm_error(sol, x, y, grid, exec),
        _ => Err(Error::MissingExactSolution),
    }
}

/// `‖P_n f − f‖∞` on the grid.
pub fn best_approximation_error(
    f: &Function,
    basis: &Basis,
    rule: &QuadRule,
    grid: usize,
    exec: Execution,
) -> Result<f64> {
    let coeffs = try_project(|t| f.eval(t), basis, rule)?;
    grid_max(basis.horizon(), grid, exec, |t| {
        Ok(basis.combine_unchecked(&coeffs, t) - f.eval(t)?)
    })
}

/// Projections of both equation residuals onto every basis function:
/// entries `0..n` for the first equation, `n..2n` for the constraint
/// (the undifferentiated one for the direct method, the differentiated one
/// for the indirect method). Inner Volterra integrals use the same rule.
pub fn residual_check(sol: &GalerkinSolution, p: &IaeProblem, rule: &QuadRule) -> Result<Vec<f64>> {
    let basis = &sol.basis;
    let horizon = basis.horizon();
    let n = basis.len();
    let xn = |s: f64| basis.combine_unchecked(&sol.coeff_x, s);
    let yn = |s: f64| basis.combine_unchecked(&sol.coeff_y, s);

    // ∫_0^t a(t,s) x_n(s) + b(t,s) y_n(s) ds
    let volterra = |t: f64, a: &dyn Fn(f64, f64) -> Result<f64>, b: &dyn Fn(f64, f64) -> Result<f64>| {
        try_integrate_interval(|s| Ok::<_, Error>(a(t, s)? * xn(s) + b(t, s)? * yn(s)), t, rule)
    };

    let r1 = |t: f64| -> Result<f64> {
        let v = volterra(t, &|t, s| p.k11.eval(t, s), &|t, s| p.k12.eval(t, s))?;
        Ok(xn(t) - p.f1.eval(t)? - v)
    };
    let r2 = |t: f64| -> Result<f64> {
        match sol.method {
            Method::Direct => {
                let v = volterra(t, &|t, s| p.k21.eval(t, s), &|t, s| p.k22.eval(t, s))?;
                Ok(p.f2.eval(t)? + v)
            }
            Method::Indirect => {
                let kappa = p.k22.eval(t, t)?;
                let v = volterra(t, &|t, s| p.dk21_dt_at(t, s), &|t, s| p.dk22_dt_at(t, s))?;
                Ok(yn(t) + (p.k21.eval(t, t)? * xn(t) + v + p.df2_dt_at(t)?) / kappa)
            }
        }
    };

    let mut out = Vec::with_capacity(2 * n);
    for j in 0..n {
        out.push(try_integrate_interval(|t| Ok::<_, Error>(r1(t)? * basis.eval_unchecked(j, t)), horizon, rule)?);
    }
    for j in 0..n {
        out.push(try_integrate_interval(|t| Ok::<_, Error>(r2(t)? * basis.eval_unchecked(j, t)), horizon, rule)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_direct, assemble_indirect};
    use crate::problem::builtin_example1;
    use crate::quadrature::gauss_rule;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sin_fn() -> Function {
        Function::parse("sin(t)").unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let basis = Basis::new(1.0, 4).unwrap();
        let sol = GalerkinSolution::new(vec![1.0, 0.0, 0.0, 0.0], vec![0.0; 4], basis, Method::Direct).unwrap();
        assert_abs_diff_eq!(sol.evaluate(0.3).unwrap().0, 1.0, epsilon = 1e-15);
        let zero = GalerkinSolution::new(vec![0.0; 4], vec![0.0; 4], basis, Method::Direct).unwrap();
        assert_eq!(zero.evaluate(0.7).unwrap(), (0.0, 0.0));
        assert!(zero.evaluate(1.2).is_err());

        let basis = Basis::new(1.0, 10).unwrap();
        let rule = gauss_rule(20).unwrap();
        let c = project(f64::sin, &basis, &rule).unwrap();
        let sol = GalerkinSolution::new(c, vec![0.0; 10], basis, Method::Direct).unwrap();
        assert_abs_diff_eq!(sol.evaluate(0.5).unwrap().0, 0.5f64.sin(), epsilon = 1e-12);
    }

    #[test]
    fn solution_shape_checked() {
        let basis = Basis::new(1.0, 3).unwrap();
        assert!(GalerkinSolution::new(vec![0.0; 2], vec![0.0; 3], basis, Method::Direct).is_err());
        assert!(GalerkinSolution::new(vec![f64::NAN; 3], vec![0.0; 3], basis, Method::Direct).is_err());
    }

    #[test]
    fn project_examples() {
        let basis = Basis::new(1.0, 3).unwrap();
        let rule = gauss_rule(5).unwrap();
        let c = project(|_| 1.0, &basis, &rule).unwrap();
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c[1], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c[2], 0.0, epsilon = 1e-13);

        // f(t) = t against V_0 = 1 and V_1 = sqrt(3)(2t - 1):
        // c_0 = 1/2, c_1 = sqrt(3)(2/3 - 1/2) = sqrt(3)/6.
        let basis = Basis::new(1.0, 2).unwrap();
        let c = project(|t| t, &basis, &gauss_rule(4).unwrap()).unwrap();
        assert_abs_diff_eq!(c[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c[1], 3f64.sqrt() / 6.0, epsilon = 1e-15);

        assert!(project(|t| t, &basis, &gauss_rule(3).unwrap()).is_err());
    }

    #[test]
    fn best_approximation_n2() {
        let basis = Basis::new(1.0, 2).unwrap();
        let e = best_approximation_error(&sin_fn(), &basis, &gauss_rule(10).unwrap(), DEFAULT_GRID, Execution::Sequential).unwrap();
        assert!((e - 5.1e-2).abs() / 5.1e-2 < 0.2, "{e}");
    }

    #[test]
    fn exact_projection_error_is_best_approximation() {
        let basis = Basis::new(1.0, 6).unwrap();
        let rule = gauss_rule(12).unwrap();
        let cx = project(f64::sin, &basis, &rule).unwrap();
        let cy = project(f64::cos, &basis, &rule).unwrap();
        let sol = GalerkinSolution::new(cx, cy, basis, Method::Indirect).unwrap();
        let cos_fn = Function::parse("cos(t)").unwrap();
        let report = max_norm_error(&sol, &sin_fn(), &cos_fn, DEFAULT_GRID, Execution::Parallel).unwrap();
        let bx = best_approximation_error(&sin_fn(), &basis, &rule, DEFAULT_GRID, Execution::Sequential).unwrap();
        let by = best_approximation_error(&cos_fn, &basis, &rule, DEFAULT_GRID, Execution::Sequential).unwrap();
        assert_abs_diff_eq!(report.err_x, bx, epsilon = 1e-13);
        assert_abs_diff_eq!(report.err_y, by, epsilon = 1e-13);
        assert_eq!(report.n, 6);
        assert_eq!(report.grid, DEFAULT_GRID);
    }

    #[test]
    fn missing_exact_solution() {
        let mut p = builtin_example1();
        p.exact_y = None;
        let rule = gauss_rule(8).unwrap();
        let sol = assemble_direct(&p, 4, &rule).unwrap().solve().unwrap();
        assert!(matches!(problem_error(&sol, &p, 11, Execution::Sequential), Err(Error::MissingExactSolution)));
    }

    #[test]
    fn grid_must_have_two_points() {
        assert!(grid_max(1.0, 1, Execution::Sequential, |_| Ok(0.0)).is_err());
    }

    #[test]
    fn residual_of_solved_systems() {
        let p = builtin_example1();
        let check = gauss_rule(24).unwrap();
        for (system, tol) in [
            (assemble_direct(&p, 6, &gauss_rule(12).unwrap()).unwrap(), 1e-9),
            (assemble_indirect(&p, 6, &gauss_rule(12).unwrap()).unwrap(), 1e-9),
        ] {
            let sol = system.solve().unwrap();
            let r = residual_check(&sol, &p, &check).unwrap();
            assert_eq!(r.len(), 12);
            assert!(r.iter().all(|v| v.abs() <= tol), "{:?}: {r:?}", system.method);
        }
    }

    #[test]
    fn residual_of_zero_guess_is_data() {
        let p = builtin_example1();
        let basis = Basis::new(1.0, 4).unwrap();
        let rule = gauss_rule(16).unwrap();
        let zero = GalerkinSolution::new(vec![0.0; 4], vec![0.0; 4], basis, Method::Direct).unwrap();
        let r = residual_check(&zero, &p, &rule).unwrap();
        let f1 = try_project(|t| p.f1.eval(t), &basis, &rule).unwrap();
        let f2 = try_project(|t| p.f2.eval(t), &basis, &rule).unwrap();
        for j in 0..4 {
            assert_abs_diff_eq!(r[j], -f1[j], epsilon = 1e-15);
            assert_abs_diff_eq!(r[4 + j], f2[j], epsilon = 1e-15);
        }
    }

    #[test]
    fn residual_reacts_to_perturbation() {
        let p = builtin_example1();
        let rule = gauss_rule(12).unwrap();
        let check = gauss_rule(24).unwrap();
        let mut sol = assemble_direct(&p, 6, &rule).unwrap().solve().unwrap();
        let base: f64 = residual_check(&sol, &p, &check).unwrap().iter().map(|v| v.abs()).fold(0.0, f64::max);
        sol.coeff_x[0] += 1.0;
        let bumped: f64 = residual_check(&sol, &p, &check).unwrap().iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(bumped - base >= 0.1, "{base} -> {bumped}");
    }

    proptest! {
        #[test]
        fn projection_idempotent(a in -2.0f64..2.0, w in 0.1f64..6.0, n in 1usize..10) {
            let basis = Basis::new(1.5, n).unwrap();
            let rule = gauss_rule(2 * n + 4).unwrap();
            let c = project(|t| (w * t).sin() + a * t * t, &basis, &rule).unwrap();
            let again = project(|t| basis.combine_unchecked(&c, t), &basis, &rule).unwrap();
            for (u, v) in c.iter().zip(&again) {
                prop_assert!((u - v).abs() <= 1e-13);
            }
        }
    }
}
