//! Convergence studies: errors over a list of basis sizes for one or both
//! methods, and best-approximation errors for reference.

use std::fmt;
use std::str::FromStr;

use crate::assembly::{assemble_with, Method};
use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::par::{try_map_indices, Execution};
use crate::problem::{Function, IaeProblem};
use crate::quadrature::gauss_rule;
use crate::solution::{best_approximation_error, problem_error, ErrorReport};

/// How many Gauss points to use for a basis of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadPolicy {
    /// `max(2n, 10)`.
    #[default]
    Auto,
    Fixed(usize),
    /// `m = n`.
    Matched,
}

impl QuadPolicy {
    pub fn order_for(self, n: usize) -> usize {
        match self {
            QuadPolicy::Auto => (2 * n).max(10),
            QuadPolicy::Fixed(m) => m,
            QuadPolicy::Matched => n,
        }
    }
}

impl fmt::Display for QuadPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadPolicy::Auto => f.write_str("auto"),
            QuadPolicy::Fixed(m) => write!(f, "{m}"),
            QuadPolicy::Matched => f.write_str("matched"),
        }
    }
}

/// Checks that `n_list` is nonempty, positive and strictly increasing.
pub fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("n-list must not be empty".into()));
    }
    if n_list[0] == 0 {
        return Err(Error::InvalidArgument("basis sizes must be at least 1".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n-list must be increasing".into()));
    }
    Ok(())
}

pub fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    let list = s
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad basis size '{}'", part.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    check_n_list(&list)?;
    Ok(list)
}

impl FromStr for QuadPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(QuadPolicy::Auto),
            "matched" => Ok(QuadPolicy::Matched),
            _ => s
                .parse()
                .ok()
                .filter(|&m| m > 0)
                .map(QuadPolicy::Fixed)
                .ok_or_else(|| Error::InvalidArgument(format!("bad quadrature order '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub methods: Vec<Method>,
    pub n_list: Vec<usize>,
    pub quad: QuadPolicy,
    pub grid: usize,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        check_n_list(&self.n_list)?;
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("no method selected".into()));
        }
        if let QuadPolicy::Fixed(m) = self.quad {
            let max_n = *self.n_list.last().expect("checked nonempty");
            if m < max_n {
                return Err(Error::InvalidArgument(format!(
                    "quadrature order {m} is below the largest basis size {max_n}"
                )));
            }
        }
        Ok(())
    }
}

/// Runs every `(method, n)` cell; reports come back in config order
/// (methods outer, sizes inner).
pub fn convergence_study(
    p: &IaeProblem,
    cfg: &StudyConfig,
    exec: Execution,
) -> Result<Vec<ErrorReport>> {
    cfg.validate()?;
    if p.exact_x.is_none() || p.exact_y.is_none() {
        return Err(Error::MissingExactSolution);
    }
    let cells: Vec<(Method, usize)> = cfg
        .methods
        .iter()
        .flat_map(|&m| cfg.n_list.iter().map(move |&n| (m, n)))
        .collect();
    // Cells run in parallel; the work inside each cell stays sequential.
    try_map_indices(exec, cells.len(), |k| {
        let (method, n) = cells[k];
        let rule = gauss_rule(cfg.quad.order_for(n))?;
        let sol = assemble_with(p, n, &rule, method, Execution::Sequential)?.solve()?;
        problem_error(&sol, p, cfg.grid, Execution::Sequential)
    })
}

/// `‖P_n f − f‖∞` for each `n`; the projection rule has at least `n + 2` points.
pub fn best_approximation_study(
    f: &Function,
    horizon: f64,
    n_list: &[usize],
    quad: QuadPolicy,
    grid: usize,
    exec: Execution,
) -> Result<Vec<f64>> {
    check_n_list(n_list)?;
    try_map_indices(exec, n_list.len(), |k| {
        let n = n_list[k];
        let basis = Basis::new(horizon, n)?;
        let rule = gauss_rule(quad.order_for(n).max(n + 2))?;
        best_approximation_error(f, &basis, &rule, grid, Execution::Sequential)
    })
}

/// Least-squares slope of `log10(err)` against `n`.
pub fn log10_slope(ns: &[usize], errs: &[f64]) -> Result<f64> {
    if ns.len() != errs.len() || ns.len() < 2 {
        return Err(Error::InvalidArgument("slope fit needs at least two matching points".into()));
    }
    if errs.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return Err(Error::Domain("slope fit needs positive errors".into()));
    }
    let k = ns.len() as f64;
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.log10()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::builtin_example1;

    #[test]
    fn policies() {
        assert_eq!(QuadPolicy::Auto.order_for(2), 10);
        assert_eq!(QuadPolicy::Auto.order_for(8), 16);
        assert_eq!(QuadPolicy::Matched.order_for(6), 6);
        assert_eq!(QuadPolicy::Fixed(30).order_for(6), 30);
        assert_eq!("auto".parse::<QuadPolicy>().unwrap(), QuadPolicy::Auto);
        assert_eq!("12".parse::<QuadPolicy>().unwrap(), QuadPolicy::Fixed(12));
        assert!("0".parse::<QuadPolicy>().is_err());
    }

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("2, 4,6").unwrap(), vec![2, 4, 6]);
        let err = parse_n_list("10,2").unwrap_err();
        assert!(err.to_string().contains("n-list must be increasing"));
        assert!(parse_n_list("2,2").is_err());
        assert!(parse_n_list("0,2").is_err());
        assert!(parse_n_list("a").is_err());
        assert!(check_n_list(&[]).is_err());
    }

    #[test]
    fn fixed_order_must_cover_sizes() {
        let cfg = StudyConfig {
            methods: vec![Method::Direct],
            n_list: vec![2, 8],
            quad: QuadPolicy::Fixed(6),
            grid: 101,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn study_order_and_policy_independence() {
        let p = builtin_example1();
        let cfg = StudyConfig {
            methods: vec![Method::Indirect, Method::Direct],
            n_list: vec![2, 4, 6],
            quad: QuadPolicy::Auto,
            grid: 201,
        };
        let a = convergence_study(&p, &cfg, Execution::Sequential).unwrap();
        let b = convergence_study(&p, &cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let order: Vec<_> = a.iter().map(|r| (r.method, r.n)).collect();
        assert_eq!(
            order,
            vec![
                (Method::Indirect, 2),
                (Method::Indirect, 4),
                (Method::Indirect, 6),
                (Method::Direct, 2),
                (Method::Direct, 4),
                (Method::Direct, 6)
            ]
        );
    }

    #[test]
    fn slope_of_exact_exponential() {
        let ns = [2, 4, 6, 8];
        let errs: Vec<f64> = ns.iter().map(|&n| 10f64.powf(-1.5 * n as f64 + 0.3)).collect();
        assert!((log10_slope(&ns, &errs).unwrap() + 1.5).abs() < 1e-12);
        assert!(log10_slope(&[1], &[1.0]).is_err());
        assert!(log10_slope(&[1, 2], &[1.0, 0.0]).is_err());
    }
}
