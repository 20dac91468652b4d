//! A small expression language for kernels `k(t, s)` and data functions
//! `f(t)`: parsing, evaluation and symbolic differentiation.

mod diff;
mod parser;

use std::fmt;

use crate::error::{Error, Result};

pub use parser::parse_expression;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    S,
}

impl Var {
    pub fn name(self) -> char {
        match self {
            Var::T => 't',
            Var::S => 's',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Expression tree. Exponents are integers.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn pow(a: Expr, k: i32) -> Expr {
        Expr::Pow(Box::new(a), k)
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.contains_var(v),
            Expr::Bin(_, a, b) => a.contains_var(v) || b.contains_var(v),
        }
    }

    /// Evaluates at `t` and, when bound, `s`. Division by zero, `log` of a
    /// non-positive number and `sqrt` of a negative number are errors, as is
    /// any non-finite intermediate.
    pub fn eval(&self, t: f64, s: Option<f64>) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Pi => std::f64::consts::PI,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::S) => s.ok_or(Error::UnboundVariable('s'))?,
            Expr::Neg(a) => -a.eval(t, s)?,
            Expr::Bin(op, a, b) => {
                let x = a.eval(t, s)?;
                let y = b.eval(t, s)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(Error::Domain(format!("division by zero in {self}")));
                        }
                        x / y
                    }
                }
            }
            Expr::Pow(a, k) => {
                let x = a.eval(t, s)?;
                if x == 0.0 && *k < 0 {
                    return Err(Error::Domain(format!("division by zero in {self}")));
                }
                x.powi(*k)
            }
            Expr::Call(f, a) => {
                let x = a.eval(t, s)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(Error::Domain(format!("log of non-positive value {x}")));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(Error::Domain(format!("sqrt of negative value {x}")));
                        }
                        x.sqrt()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("non-finite value in {self}")))
        }
    }

    /// Symbolic derivative with respect to `var`, lightly simplified.
    pub fn differentiate(&self, var: Var) -> Expr {
        diff::simplify(diff::derive(self, var))
    }

    pub fn simplify(self) -> Expr {
        diff::simplify(self)
    }
}

// Printing precedence levels: sum < product < unary < power < atom.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Num(v) if *v < 0.0 || v.is_sign_negative() => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_with(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if v.is_sign_negative() {
                    write!(f, "-{:?}", -v)
                } else {
                    write!(f, "{v:?}")
                }
            }
            Expr::Pi => f.write_str("pi"),
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_with(f, a, 3)
            }
            Expr::Bin(op, a, b) => {
                let (sym, p) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                };
                write_with(f, a, p)?;
                f.write_str(sym)?;
                // Left-associative: the right operand needs strictly higher precedence.
                write_with(f, b, p + 1)
            }
            Expr::Pow(a, k) => {
                write_with(f, a, 5)?;
                write!(f, "^{k}")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("s+t").eval(1.0, Some(2.0)).unwrap(), 3.0);
        assert_eq!(p("s-t^2").eval(2.0, Some(1.0)).unwrap(), -3.0);
        assert_abs_diff_eq!(p("sin(t)*t^2").eval(1.0, None).unwrap(), 0.8414709848078965, epsilon = 1e-15);
    }

    #[test]
    fn eval_errors() {
        assert!(matches!(p("s+t").eval(1.0, None), Err(Error::UnboundVariable('s'))));
        assert!(matches!(p("1/(t-1)").eval(1.0, None), Err(Error::Domain(_))));
        assert!(matches!(p("log(t)").eval(0.0, None), Err(Error::Domain(_))));
        assert!(matches!(p("log(t)").eval(-1.0, None), Err(Error::Domain(_))));
        assert!(matches!(p("sqrt(t)").eval(-1e-3, None), Err(Error::Domain(_))));
        assert!(matches!(p("t^-2").eval(0.0, None), Err(Error::Domain(_))));
        assert!(matches!(p("exp(t)").eval(1e4, None), Err(Error::Domain(_))));
        assert_eq!(p("sqrt(t)").eval(0.0, None).unwrap(), 0.0);
    }

    #[test]
    fn eval_is_bit_identical() {
        let e = p("exp(-t)*cos(3*s)/(1+t^2) - sqrt(t+s)*log(2+s)");
        let a = e.eval(0.37, Some(0.21)).unwrap();
        for _ in 0..10 {
            assert_eq!(a.to_bits(), e.eval(0.37, Some(0.21)).unwrap().to_bits());
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let sources = [
            "s+t",
            "s^2+t^2",
            "-t-2*sin(t)*t^2+2*sin(t)",
            "t^2-2*sin(t)+cos(t)*t-cos(t)*t^2+1-cos(t)-2*sin(t)*t",
            "a",
            "1-(t-s)-(2-t)",
            "t/(s/2)/3",
            "-(t+1)^3*-2",
            "-t^2",
            "(-t)^2",
            "exp(-t)/sqrt(1+s^2)*tan(pi*t/8)",
            "2.5e-3*t^-2+1",
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for src in sources {
            let Ok(e) = parse_expression(src) else {
                assert_eq!(src, "a");
                continue;
            };
            let printed = e.to_string();
            let again = parse_expression(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
            for _ in 0..20 {
                let t = rng.gen_range(0.1..1.0);
                let s = rng.gen_range(0.1..1.0);
                let a = e.eval(t, Some(s)).unwrap();
                let b = again.eval(t, Some(s)).unwrap();
                assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()), "{src} -> {printed}");
            }
        }
    }

    #[test]
    fn negative_literal_prints_parseably() {
        let e = Expr::bin(BinOp::Sub, Expr::var(Var::T), Expr::num(-2.0));
        let again = parse_expression(&e.to_string()).unwrap();
        assert_eq!(again.eval(1.0, None).unwrap(), 3.0);
        let e = Expr::pow(Expr::num(-2.0), 2);
        assert_eq!(parse_expression(&e.to_string()).unwrap().eval(0.0, None).unwrap(), 4.0);
    }
}
