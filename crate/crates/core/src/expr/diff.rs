//! Symbolic differentiation and a light simplifier (constant folding,
//! additive zeros, multiplicative ones and zeros).

use super::{BinOp, Expr, Func, Var};

pub(super) fn derive(e: &Expr, var: Var) -> Expr {
    use Expr::*;
    if !e.contains_var(var) {
        return Num(0.0);
    }
    match e {
        Num(_) | Pi => Num(0.0),
        Var(v) => Num(if *v == var { 1.0 } else { 0.0 }),
        Neg(a) => Expr::neg(derive(a, var)),
        Bin(op, a, b) => {
            let (da, db) = (derive(a, var), derive(b, var));
            let (a, b) = ((**a).clone(), (**b).clone());
            match op {
                BinOp::Add | BinOp::Sub => Expr::bin(*op, da, db),
                BinOp::Mul => Expr::bin(
                    BinOp::Add,
                    Expr::bin(BinOp::Mul, da, b),
                    Expr::bin(BinOp::Mul, a, db),
                ),
                BinOp::Div => Expr::bin(
                    BinOp::Div,
                    Expr::bin(
                        BinOp::Sub,
                        Expr::bin(BinOp::Mul, da, b.clone()),
                        Expr::bin(BinOp::Mul, a, db),
                    ),
                    Expr::pow(b, 2),
                ),
            }
        }
        Pow(a, k) => Expr::bin(
            BinOp::Mul,
            Expr::bin(BinOp::Mul, Num(*k as f64), Expr::pow((**a).clone(), k - 1)),
            derive(a, var),
        ),
        Call(f, a) => {
            let inner = (**a).clone();
            let outer = match f {
                Func::Sin => Expr::call(Func::Cos, inner),
                Func::Cos => Expr::neg(Expr::call(Func::Sin, inner)),
                Func::Tan => Expr::pow(Expr::call(Func::Cos, inner), -2),
                Func::Exp => Expr::call(Func::Exp, inner),
                Func::Log => Expr::pow(inner, -1),
                Func::Sqrt => Expr::bin(
                    BinOp::Div,
                    Num(0.5),
                    Expr::call(Func::Sqrt, inner),
                ),
            };
            Expr::bin(BinOp::Mul, outer, derive(a, var))
        }
    }
}

fn is_num(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Num(x) if *x == v)
}

pub(super) fn simplify(e: Expr) -> Expr {
    use Expr::*;
    match e {
        Num(_) | Pi | Var(_) => e,
        Neg(a) => match simplify(*a) {
            Num(x) => Num(-x),
            Neg(inner) => *inner,
            a => Expr::neg(a),
        },
        Pow(a, k) => {
            let a = simplify(*a);
            match (a, k) {
                (_, 0) => Num(1.0),
                (a, 1) => a,
                (Num(x), k) if x != 0.0 || k > 0 => Num(x.powi(k)),
                (a, k) => Expr::pow(a, k),
            }
        }
        Call(f, a) => Expr::call(f, simplify(*a)),
        Bin(op, a, b) => {
            let (a, b) = (simplify(*a), simplify(*b));
            if let (Num(x), Num(y)) = (&a, &b) {
                let folded = match op {
                    BinOp::Add => Some(x + y),
                    BinOp::Sub => Some(x - y),
                    BinOp::Mul => Some(x * y),
                    BinOp::Div if *y != 0.0 => Some(x / y),
                    BinOp::Div => None,
                };
                if let Some(v) = folded {
                    return Num(v);
                }
            }
            match op {
                BinOp::Add if is_num(&a, 0.0) => b,
                BinOp::Add | BinOp::Sub if is_num(&b, 0.0) => a,
                BinOp::Sub if is_num(&a, 0.0) => simplify(Expr::neg(b)),
                BinOp::Mul if is_num(&a, 0.0) || is_num(&b, 0.0) => Num(0.0),
                BinOp::Mul if is_num(&a, 1.0) => b,
                BinOp::Mul | BinOp::Div if is_num(&b, 1.0) => a,
                BinOp::Mul if is_num(&a, -1.0) => simplify(Expr::neg(b)),
                BinOp::Div if is_num(&a, 0.0) => Num(0.0),
                _ => Expr::bin(op, a, b),
            }
        }
    }
}
