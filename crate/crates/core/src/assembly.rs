//! Galerkin systems for the direct method (project the constraint as is)
//! and the indirect method (project the differentiated constraint).
//!
//! Unknowns are ordered `[x_0..x_{n-1}, y_0..y_{n-1}]`, the coefficients of
//! `x_n` and `y_n` in the orthonormal basis. Rows `0..n` project the first
//! equation, rows `n..2n` the second. With
//! `G^{pq}_{ji} = ∫_0^T ∫_0^t k^{pq}(t,s) V_i(s) V_j(t) ds dt`:
//!
//! ```text
//! row j      : x_j - Σ G11_ji x_i - Σ G12_ji y_i            =  <f1, V_j>
//! row n+j (D): Σ G21_ji x_i + Σ G22_ji y_i                  = -<f2, V_j>
//! row n+j (I): y_j + Σ (D_ji + H21_ji) x_i + Σ H22_ji y_i   = -<f2'/κ, V_j>
//! ```
//!
//! where `κ(t) = k22(t,t)`, `D_ji = ∫ k21(t,t)/κ(t) V_i V_j dt` and `H2q` is
//! `G2q` with the kernel replaced by `∂_t k2q(t,s) / κ(t)`.

use std::fmt;
use std::str::FromStr;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::linalg::{lu_solve, DenseMatrix};
use crate::par::{try_map_indices, Execution};
use crate::problem::{IaeProblem, Kernel};
use crate::quadrature::{try_integrate_interval, try_integrate_triangle, QuadRule};
use crate::solution::GalerkinSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    Indirect,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Indirect => "indirect",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "indirect" => Ok(Method::Indirect),
            _ => Err(Error::InvalidArgument(format!("unknown method '{s}'"))),
        }
    }
}

/// An assembled `2n × 2n` Galerkin system.
#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub n: usize,
    pub method: Method,
    pub basis: Basis,
}

impl GalerkinSystem {
    pub fn solve(&self) -> Result<GalerkinSolution> {
        let z = lu_solve(&self.matrix, &self.rhs)?;
        let (x, y) = z.split_at(self.n);
        GalerkinSolution::new(x.to_vec(), y.to_vec(), self.basis, self.method)
    }
}

struct Row {
    entries: Vec<f64>,
    rhs: f64,
}

/// `∫∫_{s≤t} k(t,s) V_i(s) V_j(t)` for every `i`, with `k` given pointwise.
fn volterra_row<F>(basis: &Basis, j: usize, rule: &QuadRule, kernel: F) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    (0..basis.len())
        .map(|i| {
            try_integrate_triangle(
                |t, s| Ok(kernel(t, s)? * basis.eval_unchecked(i, s) * basis.eval_unchecked(j, t)),
                basis.horizon(),
                rule,
            )
        })
        .collect()
}

fn kernel_row(basis: &Basis, j: usize, rule: &QuadRule, k: &Kernel) -> Result<Vec<f64>> {
    volterra_row(basis, j, rule, |t, s| k.eval(t, s))
}

fn first_equation_row(p: &IaeProblem, basis: &Basis, j: usize, rule: &QuadRule) -> Result<Row> {
    let n = basis.len();
    let g11 = kernel_row(basis, j, rule, &p.k11)?;
    let g12 = kernel_row(basis, j, rule, &p.k12)?;
    let mut entries = Vec::with_capacity(2 * n);
    entries.extend(g11.iter().enumerate().map(|(i, g)| if i == j { 1.0 - g } else { -g }));
    entries.extend(g12.iter().map(|g| -g));
    let rhs = try_integrate_interval(
        |t| Ok::<_, Error>(p.f1.eval(t)? * basis.eval_unchecked(j, t)),
        basis.horizon(),
        rule,
    )?;
    Ok(Row { entries, rhs })
}

fn direct_constraint_row(p: &IaeProblem, basis: &Basis, j: usize, rule: &QuadRule) -> Result<Row> {
    let mut entries = kernel_row(basis, j, rule, &p.k21)?;
    entries.extend(kernel_row(basis, j, rule, &p.k22)?);
    let rhs = -try_integrate_interval(
        |t| Ok::<_, Error>(p.f2.eval(t)? * basis.eval_unchecked(j, t)),
        basis.horizon(),
        rule,
    )?;
    Ok(Row { entries, rhs })
}

fn indirect_constraint_row(
    p: &IaeProblem,
    basis: &Basis,
    j: usize,
    rule: &QuadRule,
) -> Result<Row> {
    let n = basis.len();
    let horizon = basis.horizon();
    let diag = |t: f64| p.k22.eval(t, t);

    let h21 = volterra_row(basis, j, rule, |t, s| Ok(p.dk21_dt_at(t, s)? / diag(t)?))?;
    let h22 = volterra_row(basis, j, rule, |t, s| Ok(p.dk22_dt_at(t, s)? / diag(t)?))?;
    let mut entries = Vec::with_capacity(2 * n);
    for (i, h) in h21.iter().enumerate() {
        let d = try_integrate_interval(
            |t| {
                Ok::<_, Error>(
                    p.k21.eval(t, t)? / diag(t)?
                        * basis.eval_unchecked(i, t)
                        * basis.eval_unchecked(j, t),
                )
            },
            horizon,
            rule,
        )?;
        entries.push(d + h);
    }
    entries.extend(h22.iter().enumerate().map(|(i, h)| if i == j { 1.0 + h } else { *h }));
    let rhs = -try_integrate_interval(
        |t| Ok::<_, Error>(p.df2_dt_at(t)? / diag(t)? * basis.eval_unchecked(j, t)),
        horizon,
        rule,
    )?;
    Ok(Row { entries, rhs })
}

fn assemble(
    p: &IaeProblem,
    n: usize,
    rule: &QuadRule,
    method: Method,
    exec: Execution,
) -> Result<GalerkinSystem> {
    let basis = Basis::new(p.horizon, n)?;
    if method == Method::Indirect {
        p.check_derivatives()?;
    }
    let rows = try_map_indices(exec, 2 * n, |r| {
        if r < n {
            first_equation_row(p, &basis, r, rule)
        } else {
            match method {
                Method::Direct => direct_constraint_row(p, &basis, r - n, rule),
                Method::Indirect => indirect_constraint_row(p, &basis, r - n, rule),
            }
        }
    })?;
    let rhs = rows.iter().map(|r| r.rhs).collect();
    let data = rows.into_iter().flat_map(|r| r.entries).collect();
    Ok(GalerkinSystem {
        matrix: DenseMatrix::from_row_major(2 * n, 2 * n, data)?,
        rhs,
        n,
        method,
        basis,
    })
}

pub fn assemble_direct(p: &IaeProblem, n: usize, rule: &QuadRule) -> Result<GalerkinSystem> {
    assemble(p, n, rule, Method::Direct, Execution::default())
}

pub fn assemble_indirect(p: &IaeProblem, n: usize, rule: &QuadRule) -> Result<GalerkinSystem> {
    assemble(p, n, rule, Method::Indirect, Execution::default())
}

/// Assembles with an explicit execution policy; the result does not
/// depend on the policy.
pub fn assemble_with(
    p: &IaeProblem,
    n: usize,
    rule: &QuadRule,
    method: Method,
    exec: Execution,
) -> Result<GalerkinSystem> {
    assemble(p, n, rule, method, exec)
}

/// Assemble and solve in one step.
pub fn solve(
    p: &IaeProblem,
    n: usize,
    rule: &QuadRule,
    method: Method,
    exec: Execution,
) -> Result<GalerkinSolution> {
    assemble(p, n, rule, method, exec)?.solve()
}
