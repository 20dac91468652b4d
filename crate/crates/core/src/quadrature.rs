//! Gauss–Legendre rules and the two mapped integrals the Galerkin assembly
//! needs: over `[0, T]` and over the triangle `0 ≤ s ≤ t ≤ T`.

use std::convert::Infallible;
use std::f64::consts::PI;

use crate::basis::legendre_pair;
use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// An `m`-point Gauss–Legendre rule on `[-1, 1]`. Nodes are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Builds the `m`-point Gauss–Legendre rule. Roots of `P_m` are refined by
/// Newton's method from the asymptotic guess `cos(π(k - 1/4)/(m + 1/2))`;
/// the weights are `2 / ((1 - x²) P'_m(x)²)`.
pub fn gauss_rule(m: usize) -> Result<QuadRule> {
    if m == 0 {
        return Err(Error::InvalidArgument("Gauss rule needs at least one point".into()));
    }
    let mf = m as f64;
    let half = m.div_ceil(2);
    let mut pos = Vec::with_capacity(half);
    for k in 1..=half {
        let mut x = (PI * (k as f64 - 0.25) / (mf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, q) = legendre_pair(m, x);
            let dp = mf * (q - x * p) / (1.0 - x * x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { order: m });
        }
        // The middle root of an odd rule is zero.
        if m % 2 == 1 && k == half {
            x = 0.0;
        }
        let (p, q) = legendre_pair(m, x);
        let dp = mf * (q - x * p) / (1.0 - x * x);
        pos.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }

    // `pos` runs from the largest root inwards; mirror it.
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for &(x, w) in &pos {
        nodes.push(-x);
        weights.push(w);
    }
    let mirrored = if m % 2 == 1 { half - 1 } else { half };
    for &(x, w) in pos[..mirrored].iter().rev() {
        nodes.push(x);
        weights.push(w);
    }
    // Fix up -0.0 from the odd-rule middle node.
    for x in &mut nodes {
        if *x == 0.0 {
            *x = 0.0;
        }
    }
    Ok(QuadRule { nodes, weights })
}

/// `∫_0^T f(t) dt ≈ (T/2) Σ_i w_i f(T x_i/2 + T/2)`.
pub fn integrate_interval<F>(f: F, horizon: f64, rule: &QuadRule) -> f64
where
    F: Fn(f64) -> f64,
{
    match try_integrate_interval(|t| Ok::<_, Infallible>(f(t)), horizon, rule) {
        Ok(v) => v,
        Err(never) => match never {},
    }
}

pub fn try_integrate_interval<F, E>(f: F, horizon: f64, rule: &QuadRule) -> std::result::Result<f64, E>
where
    F: Fn(f64) -> std::result::Result<f64, E>,
{
    let half = 0.5 * horizon;
    let mut sum = 0.0;
    for (x, w) in rule.iter() {
        sum += w * f(half * x + half)?;
    }
    Ok(half * sum)
}

/// `∫_0^T ∫_0^t f(t, s) ds dt` by a nested Gauss rule: the outer node
/// `t_i` is mapped to `[0, T]` and the inner node to `[0, t_i]`.
pub fn integrate_triangle<F>(f: F, horizon: f64, rule: &QuadRule) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    match try_integrate_triangle(|t, s| Ok::<_, Infallible>(f(t, s)), horizon, rule) {
        Ok(v) => v,
        Err(never) => match never {},
    }
}

pub fn try_integrate_triangle<F, E>(f: F, horizon: f64, rule: &QuadRule) -> std::result::Result<f64, E>
where
    F: Fn(f64, f64) -> std::result::Result<f64, E>,
{
    let half = 0.5 * horizon;
    let mut outer = 0.0;
    for (xi, wi) in rule.iter() {
        let t = half * xi + half;
        let inner_half = 0.5 * t;
        let mut inner = 0.0;
        for (xj, wj) in rule.iter() {
            inner += wj * f(t, inner_half * xj + inner_half)?;
        }
        outer += wi * inner_half * inner;
    }
    Ok(half * outer)
}
