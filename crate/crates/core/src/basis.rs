//! Legendre polynomials on [-1, 1] and the orthonormal shifted basis on [0, T].
//!
//! Basis function `i` (0-based, exact degree `i`) is
//! `V_i(t) = sqrt((2i+1)/T) * P_i((2t - T)/T)`, so that
//! `∫_0^T V_i V_j dt = δ_ij`.

use crate::error::{Error, Result};

const ENDPOINT_SLACK: f64 = 1e-12;

/// Returns `(P_k(x), P_{k-1}(x))` by the three-term recurrence.
/// For `k = 0` the second component is 0.
pub(crate) fn legendre_pair(degree: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..degree {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Classical (unnormalised) Legendre polynomial `P_degree(x)`.
pub fn legendre_eval(degree: usize, x: f64) -> Result<f64> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    if !(x.abs() <= 1.0 + ENDPOINT_SLACK) {
        return Err(Error::Domain(format!("Legendre argument {x} outside [-1, 1]")));
    }
    Ok(legendre_pair(degree, x.clamp(-1.0, 1.0)).0)
}

/// Derivative `P'_degree(x)` on the open interval (-1, 1), from
/// `(1 - x²) P'_k(x) = k (P_{k-1}(x) - x P_k(x))`.
pub fn legendre_deriv(degree: usize, x: f64) -> Result<f64> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "Legendre derivative needs |x| < 1, got {x}"
        )));
    }
    if degree == 0 {
        return Ok(0.0);
    }
    let (p, q) = legendre_pair(degree, x);
    Ok(degree as f64 * (q - x * p) / (1.0 - x * x))
}

/// Orthonormal shifted-Legendre basis of `n` functions on `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    horizon: f64,
    n: usize,
}

impl Basis {
    pub fn new(horizon: f64, n: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("basis needs at least one function".into()));
        }
        Ok(Basis { horizon, n })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn check_point(&self, t: f64) -> Result<f64> {
        let slack = ENDPOINT_SLACK * self.horizon.max(1.0);
        if t >= -slack && t <= self.horizon + slack {
            Ok(t.clamp(0.0, self.horizon))
        } else {
            Err(Error::Domain(format!(
                "t = {t} outside [0, {}]",
                self.horizon
            )))
        }
    }

    /// Value of basis function `i` at `t`.
    pub fn eval(&self, i: usize, t: f64) -> Result<f64> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, size: self.n });
        }
        let t = self.check_point(t)?;
        Ok(self.eval_unchecked(i, t))
    }

    pub(crate) fn eval_unchecked(&self, i: usize, t: f64) -> f64 {
        let x = (2.0 * t - self.horizon) / self.horizon;
        let scale = ((2 * i + 1) as f64 / self.horizon).sqrt();
        scale * legendre_pair(i, x).0
    }

    /// All `n` basis values at `t`, by a single recurrence sweep.
    pub fn eval_all(&self, t: f64) -> Result<Vec<f64>> {
        let t = self.check_point(t)?;
        Ok(self.eval_all_unchecked(t))
    }

    pub(crate) fn eval_all_unchecked(&self, t: f64) -> Vec<f64> {
        let x = (2.0 * t - self.horizon) / self.horizon;
        let mut out = Vec::with_capacity(self.n);
        let (mut prev, mut cur) = (0.0, 1.0);
        for k in 0..self.n {
            out.push(((2 * k + 1) as f64 / self.horizon).sqrt() * cur);
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        out
    }

    /// `Σ_i coeffs[i] V_i(t)`.
    pub fn combine(&self, coeffs: &[f64], t: f64) -> Result<f64> {
        if coeffs.len() != self.n {
            return Err(Error::Dimension(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                self.n
            )));
        }
        let t = self.check_point(t)?;
        Ok(self.combine_unchecked(coeffs, t))
    }

    pub(crate) fn combine_unchecked(&self, coeffs: &[f64], t: f64) -> f64 {
        self.eval_all_unchecked(t)
            .iter()
            .zip(coeffs)
            .map(|(v, c)| v * c)
            .sum()
    }
}
