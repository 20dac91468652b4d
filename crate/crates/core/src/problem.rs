//! The index-1 IAE model
//!
//! ```text
//! x(t) = f1(t) + ∫_0^t k11(t,s) x(s) + k12(t,s) y(s) ds
//!    0 = f2(t) + ∫_0^t k21(t,s) x(s) + k22(t,s) y(s) ds
//! ```
//!
//! with `f2(0) = 0` and `|k22(t,t)| ≥ k0 > 0`, plus the built-in problems
//! and the problem-file loader.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expr, Var};

/// Smallest admissible `|k22(t,t)|` on the validation grid.
pub const DIAGONAL_TOL: f64 = 1e-8;
/// Largest admissible `|f2(0)|`.
pub const CONSISTENCY_TOL: f64 = 1e-10;
/// Grid used by [`load_problem`] for the index-1 check.
pub const VALIDATION_GRID: usize = 256;

pub type NativeKernel = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type NativeFunction = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A kernel `k(t, s)`, either symbolic or an opaque callable.
#[derive(Clone)]
pub enum Kernel {
    Expr(Expr),
    Native(NativeKernel),
}

impl Kernel {
    pub fn parse(src: &str) -> Result<Self> {
        Ok(Kernel::Expr(parse_expression(src)?))
    }

    pub fn native(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Kernel::Native(Arc::new(f))
    }

    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        match self {
            Kernel::Expr(e) => e.eval(t, Some(s)),
            Kernel::Native(f) => finite(f(t, s), "kernel"),
        }
    }

    /// Symbolic `∂k/∂t`, when the kernel is an expression.
    pub fn partial_t(&self) -> Option<Kernel> {
        match self {
            Kernel::Expr(e) => Some(Kernel::Expr(e.differentiate(Var::T))),
            Kernel::Native(_) => None,
        }
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Expr(e) => write!(f, "Kernel({e})"),
            Kernel::Native(_) => f.write_str("Kernel(<native>)"),
        }
    }
}

/// A univariate function of `t`.
#[derive(Clone)]
pub enum Function {
    Expr(Expr),
    Native(NativeFunction),
}

impl Function {
    pub fn parse(src: &str) -> Result<Self> {
        let e = parse_expression(src)?;
        if e.contains_var(Var::S) {
            return Err(Error::UnboundVariable('s'));
        }
        Ok(Function::Expr(e))
    }

    pub fn native(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Function::Native(Arc::new(f))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Function::Expr(e) => e.eval(t, None),
            Function::Native(f) => finite(f(t), "function"),
        }
    }

    pub fn derivative(&self) -> Option<Function> {
        match self {
            Function::Expr(e) => Some(Function::Expr(e.differentiate(Var::T))),
            Function::Native(_) => None,
        }
    }
}

impl fmt::Debug for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Function::Expr(e) => write!(f, "Function({e})"),
            Function::Native(_) => f.write_str("Function(<native>)"),
        }
    }
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{what} returned {v}")))
    }
}

fn fd_step(t: f64) -> f64 {
    1e-6 * t.abs().max(1.0)
}

#[derive(Debug, Clone)]
pub struct IaeProblem {
    pub name: String,
    pub horizon: f64,
    pub k11: Kernel,
    pub k12: Kernel,
    pub k21: Kernel,
    pub k22: Kernel,
    pub f1: Function,
    pub f2: Function,
    pub dk21_dt: Option<Kernel>,
    pub dk22_dt: Option<Kernel>,
    pub df2_dt: Option<Function>,
    pub exact_x: Option<Function>,
    pub exact_y: Option<Function>,
    /// Replace missing derivatives by central differences.
    pub fd_fallback: bool,
}

impl IaeProblem {
    /// Builds a problem; derivatives of symbolic kernels and data are
    /// attached automatically.
    pub fn new(
        name: impl Into<String>,
        horizon: f64,
        [k11, k12, k21, k22]: [Kernel; 4],
        f1: Function,
        f2: Function,
    ) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidArgument(format!("T must be positive, got {horizon}")));
        }
        Ok(IaeProblem {
            name: name.into(),
            horizon,
            dk21_dt: k21.partial_t(),
            dk22_dt: k22.partial_t(),
            df2_dt: f2.derivative(),
            k11,
            k12,
            k21,
            k22,
            f1,
            f2,
            exact_x: None,
            exact_y: None,
            fd_fallback: false,
        })
    }

    pub fn with_exact(mut self, x: Function, y: Function) -> Self {
        self.exact_x = Some(x);
        self.exact_y = Some(y);
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidArgument(format!("T must be positive, got {horizon}")));
        }
        self.horizon = horizon;
        Ok(self)
    }

    pub fn with_fd_fallback(mut self, enabled: bool) -> Self {
        self.fd_fallback = enabled;
        self
    }

    /// True when some derivative needed by the indirect method will come
    /// from finite differences.
    pub fn uses_fd_derivatives(&self) -> bool {
        self.fd_fallback
            && (self.dk21_dt.is_none() || self.dk22_dt.is_none() || self.df2_dt.is_none())
    }

    /// Fails early if the indirect method cannot obtain its derivatives.
    pub fn check_derivatives(&self) -> Result<()> {
        if self.fd_fallback {
            return Ok(());
        }
        if self.dk21_dt.is_none() {
            return Err(Error::MissingDerivatives("dk21_dt"));
        }
        if self.dk22_dt.is_none() {
            return Err(Error::MissingDerivatives("dk22_dt"));
        }
        if self.df2_dt.is_none() {
            return Err(Error::MissingDerivatives("df2_dt"));
        }
        Ok(())
    }

    fn kernel_partial_t(
        &self,
        explicit: &Option<Kernel>,
        kernel: &Kernel,
        name: &'static str,
        t: f64,
        s: f64,
    ) -> Result<f64> {
        match explicit {
            Some(k) => k.eval(t, s),
            None if self.fd_fallback => {
                let h = fd_step(t);
                Ok((kernel.eval(t + h, s)? - kernel.eval(t - h, s)?) / (2.0 * h))
            }
            None => Err(Error::MissingDerivatives(name)),
        }
    }

    pub fn dk21_dt_at(&self, t: f64, s: f64) -> Result<f64> {
        self.kernel_partial_t(&self.dk21_dt, &self.k21, "dk21_dt", t, s)
    }

    pub fn dk22_dt_at(&self, t: f64, s: f64) -> Result<f64> {
        self.kernel_partial_t(&self.dk22_dt, &self.k22, "dk22_dt", t, s)
    }

    pub fn df2_dt_at(&self, t: f64) -> Result<f64> {
        match &self.df2_dt {
            Some(f) => f.eval(t),
            None if self.fd_fallback => {
                let h = fd_step(t);
                Ok((self.f2.eval(t + h)? - self.f2.eval(t - h)?) / (2.0 * h))
            }
            None => Err(Error::MissingDerivatives("df2_dt")),
        }
    }

    /// Checks the index-1 conditions on an equispaced grid and returns the
    /// observed `k0 = min |k22(t,t)|`.
    pub fn validate_index1(&self, grid_points: usize) -> Result<f64> {
        if grid_points < 2 {
            return Err(Error::InvalidArgument("validation grid needs at least 2 points".into()));
        }
        let f2_0 = self.f2.eval(0.0)?;
        if f2_0.abs() > CONSISTENCY_TOL {
            return Err(Error::ConsistencyViolation { value: f2_0 });
        }
        let step = self.horizon / (grid_points - 1) as f64;
        let mut min = f64::INFINITY;
        let mut at = 0.0;
        for k in 0..grid_points {
            let t = k as f64 * step;
            let v = self.k22.eval(t, t)?.abs();
            if v < min {
                min = v;
                at = t;
            }
        }
        if min <= DIAGONAL_TOL {
            return Err(Error::Index1Violation { min, at });
        }
        Ok(min)
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["example1", "manufactured"];

pub fn builtin(name: &str) -> Option<IaeProblem> {
    match name {
        "example1" => Some(builtin_example1()),
        "manufactured" => Some(builtin_manufactured()),
        _ => None,
    }
}

fn from_sources(
    name: &str,
    horizon: f64,
    kernels: [&str; 4],
    f1: &str,
    f2: &str,
    exact: (&str, &str),
) -> IaeProblem {
    let [a, b, c, d] = kernels.map(|k| Kernel::parse(k).expect("built-in kernel parses"));
    IaeProblem::new(
        name,
        horizon,
        [a, b, c, d],
        Function::parse(f1).expect("built-in data parses"),
        Function::parse(f2).expect("built-in data parses"),
    )
    .expect("built-in horizon is positive")
    .with_exact(
        Function::parse(exact.0).expect("exact solution parses"),
        Function::parse(exact.1).expect("exact solution parses"),
    )
}

pub const EXAMPLE1_KERNELS: [&str; 4] = ["s+t", "s^2+t^2", "s-t^2", "s+t+1"];
pub const EXAMPLE1_F1: &str = "-t-2*sin(t)*t^2+2*sin(t)";
pub const EXAMPLE1_F2: &str = "t^2-2*sin(t)+cos(t)*t-cos(t)*t^2+1-cos(t)-2*sin(t)*t";

/// Test problem with exact solution `x = sin t`, `y = cos t` on `[0, 1]`.
pub fn builtin_example1() -> IaeProblem {
    from_sources(
        "example1",
        1.0,
        EXAMPLE1_KERNELS,
        EXAMPLE1_F1,
        EXAMPLE1_F2,
        ("sin(t)", "cos(t)"),
    )
}

/// Same kernels as `example1` with polynomial exact solution `x = t`,
/// `y = 1 - t`, which lies in the span of every basis with `n ≥ 2`.
pub fn builtin_manufactured() -> IaeProblem {
    from_sources(
        "manufactured",
        1.0,
        EXAMPLE1_KERNELS,
        "3/4*t^4-13/6*t^3+t",
        "1/2*t^4+1/2*t^3-t^2-t",
        ("t", "1-t"),
    )
}

const REQUIRED: [&str; 7] = ["k11", "k12", "k21", "k22", "f1", "f2", "T"];
const OPTIONAL: [&str; 6] = ["name", "exact_x", "exact_y", "dk21_dt", "dk22_dt", "df2_dt"];

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line: Some(line), message: message.into() }
}

/// Strips a trailing `#` comment that is not inside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(value: &str, line: usize, key: &str) -> Result<String> {
    let v = value.trim();
    if v.len() >= 2 && v.starts_with('"') && v.ends_with('"') {
        Ok(v[1..v.len() - 1].to_string())
    } else {
        Err(format_err(line, format!("value of '{key}' must be a double-quoted string")))
    }
}

/// Parses the `key = value` problem format. Does not run validation.
pub fn parse_problem(text: &str) -> Result<IaeProblem> {
    let mut entries: HashMap<String, (usize, String)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(format_err(line, "expected 'key = value'"));
        };
        let key = key.trim();
        if !REQUIRED.contains(&key) && !OPTIONAL.contains(&key) {
            return Err(format_err(line, format!("unknown key '{key}'")));
        }
        if entries.insert(key.to_string(), (line, value.trim().to_string())).is_some() {
            return Err(format_err(line, format!("duplicate key '{key}'")));
        }
    }
    for key in REQUIRED {
        if !entries.contains_key(key) {
            return Err(Error::Format {
                line: None,
                message: format!("missing required key '{key}'"),
            });
        }
    }

    let expr_at = |key: &str| -> Result<Option<(usize, Expr)>> {
        let Some((line, value)) = entries.get(key) else {
            return Ok(None);
        };
        let src = unquote(value, *line, key)?;
        let e = parse_expression(&src)
            .map_err(|e| format_err(*line, format!("bad expression for '{key}': {e}")))?;
        Ok(Some((*line, e)))
    };
    let kernel = |key: &str| -> Result<Option<Kernel>> {
        Ok(expr_at(key)?.map(|(_, e)| Kernel::Expr(e)))
    };
    let function = |key: &str| -> Result<Option<Function>> {
        match expr_at(key)? {
            Some((line, e)) if e.contains_var(Var::S) => Err(format_err(
                line,
                format!("'{key}' is a function of t only but uses s"),
            )),
            other => Ok(other.map(|(_, e)| Function::Expr(e))),
        }
    };

    let (t_line, t_value) = &entries["T"];
    let horizon: f64 = t_value
        .parse()
        .map_err(|_| format_err(*t_line, format!("T must be a decimal number, got '{t_value}'")))?;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(format_err(*t_line, "T must be positive"));
    }
    let name = match entries.get("name") {
        Some((line, v)) if v.starts_with('"') => unquote(v, *line, "name")?,
        Some((_, v)) => v.clone(),
        None => "custom".to_string(),
    };

    let req = |k: Option<Kernel>| k.expect("required key checked above");
    let mut problem = IaeProblem::new(
        name,
        horizon,
        [
            req(kernel("k11")?),
            req(kernel("k12")?),
            req(kernel("k21")?),
            req(kernel("k22")?),
        ],
        function("f1")?.expect("required key checked above"),
        function("f2")?.expect("required key checked above"),
    )?;
    if let Some(k) = kernel("dk21_dt")? {
        problem.dk21_dt = Some(k);
    }
    if let Some(k) = kernel("dk22_dt")? {
        problem.dk22_dt = Some(k);
    }
    if let Some(f) = function("df2_dt")? {
        problem.df2_dt = Some(f);
    }
    problem.exact_x = function("exact_x")?;
    problem.exact_y = function("exact_y")?;
    Ok(problem)
}

/// Reads, parses and validates a problem file.
pub fn load_problem(path: impl AsRef<Path>) -> Result<IaeProblem> {
    let text = std::fs::read_to_string(path)?;
    let problem = parse_problem(&text)?;
    problem.validate_index1(VALIDATION_GRID)?;
    Ok(problem)
}
