//! Truncated trigonometric series on the circle with exact derivatives.
//!
//! `f(θ) = c0 + Σ_{k=1..K} (a_k cos kθ + b_k sin kθ)` is the common
//! representation for support functions, their level-family rows and all
//! derived quantities. Evaluation of `f`, `f'`, `f''` is exact in the
//! coefficients; global extrema are found by a dense scan followed by
//! bisection on the (exact) derivative.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Dense scan resolution used before local refinement.
pub const COARSE_SAMPLES: usize = 4096;
/// Bisection steps after the coarse scan; deterministic.
pub const REFINE_STEPS: usize = 60;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrigSeries {
    pub c0: f64,
    /// Cosine coefficients `a_1..a_K`.
    pub cos: Vec<f64>,
    /// Sine coefficients `b_1..b_K`.
    pub sin: Vec<f64>,
}

impl TrigSeries {
    pub fn constant(c0: f64) -> Self {
        TrigSeries {
            c0,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    pub fn new(c0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        let k = cos.len().max(sin.len());
        let mut cos = cos;
        let mut sin = sin;
        cos.resize(k, 0.0);
        sin.resize(k, 0.0);
        TrigSeries { c0, cos, sin }
    }

    pub fn order(&self) -> usize {
        self.cos.len()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = self.c0;
        for k in 1..=self.order() {
            let (s, c) = (k as f64 * theta).sin_cos();
            v += self.cos[k - 1] * c + self.sin[k - 1] * s;
        }
        v
    }

    pub fn deriv(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for k in 1..=self.order() {
            let kf = k as f64;
            let (s, c) = (kf * theta).sin_cos();
            v += kf * (self.sin[k - 1] * c - self.cos[k - 1] * s);
        }
        v
    }

    pub fn second_deriv(&self, theta: f64) -> f64 {
        let mut v = 0.0;
        for k in 1..=self.order() {
            let kf = k as f64;
            let (s, c) = (kf * theta).sin_cos();
            v -= kf * kf * (self.cos[k - 1] * c + self.sin[k - 1] * s);
        }
        v
    }

    /// Series of the derivative, as its own `TrigSeries`.
    pub fn derivative_series(&self) -> TrigSeries {
        let k = self.order();
        let mut cos = vec![0.0; k];
        let mut sin = vec![0.0; k];
        for i in 0..k {
            let kf = (i + 1) as f64;
            cos[i] = kf * self.sin[i];
            sin[i] = -kf * self.cos[i];
        }
        TrigSeries { c0: 0.0, cos, sin }
    }

    /// `f'' + f`, the curvature-radius series of a support function.
    pub fn radius_series(&self) -> TrigSeries {
        let k = self.order();
        let mut cos = vec![0.0; k];
        let mut sin = vec![0.0; k];
        for i in 0..k {
            let w = 1.0 - ((i + 1) as f64).powi(2);
            cos[i] = w * self.cos[i];
            sin[i] = w * self.sin[i];
        }
        TrigSeries { c0: self.c0, cos, sin }
    }

    /// Coefficientwise `alpha * self + beta * other`.
    pub fn combine(&self, other: &TrigSeries, alpha: f64, beta: f64) -> TrigSeries {
        let k = self.order().max(other.order());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        let mut cos = vec![0.0; k];
        let mut sin = vec![0.0; k];
        for i in 0..k {
            cos[i] = alpha * get(&self.cos, i) + beta * get(&other.cos, i);
            sin[i] = alpha * get(&self.sin, i) + beta * get(&other.sin, i);
        }
        TrigSeries {
            c0: alpha * self.c0 + beta * other.c0,
            cos,
            sin,
        }
    }

    /// Global minimum over the circle: dense scan + derivative bisection.
    pub fn global_min(&self) -> (f64, f64) {
        extremum_on_circle(|t| self.eval(t), |t| self.deriv(t), false)
    }

    /// Global maximum over the circle.
    pub fn global_max(&self) -> (f64, f64) {
        extremum_on_circle(|t| self.eval(t), |t| self.deriv(t), true)
    }

    /// Least-squares fit of order `order` to uniform samples over `[0, 2π)`.
    ///
    /// For uniformly spaced samples the trigonometric basis is discretely
    /// orthogonal, so the fit reduces to discrete Fourier coefficients
    /// (valid for `order < m/2`).
    pub fn fit_uniform(values: &[f64], order: usize) -> TrigSeries {
        let m = values.len();
        assert!(m >= 4, "need at least 4 samples");
        let order = order.min(m / 2 - 1);
        let c0 = values.iter().sum::<f64>() / m as f64;
        let mut cos = vec![0.0; order];
        let mut sin = vec![0.0; order];
        for k in 1..=order {
            let mut ak = 0.0;
            let mut bk = 0.0;
            for (j, &v) in values.iter().enumerate() {
                let phase = k as f64 * TAU * j as f64 / m as f64;
                let (s, c) = phase.sin_cos();
                ak += v * c;
                bk += v * s;
            }
            cos[k - 1] = 2.0 * ak / m as f64;
            sin[k - 1] = 2.0 * bk / m as f64;
        }
        TrigSeries { c0, cos, sin }
    }
}

/// Locate a global extremum of a smooth periodic function by a coarse scan
/// over `COARSE_SAMPLES` points followed by `REFINE_STEPS` bisection steps on
/// the derivative inside the bracketing interval. Returns `(theta, value)`.
pub fn extremum_on_circle(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    maximize: bool,
) -> (f64, f64) {
    let n = COARSE_SAMPLES;
    let mut best_j = 0usize;
    let mut best = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
    for j in 0..n {
        let t = TAU * j as f64 / n as f64;
        let v = f(t);
        if (maximize && v > best) || (!maximize && v < best) {
            best = v;
            best_j = j;
        }
    }
    let step = TAU / n as f64;
    let center = TAU * best_j as f64 / n as f64;
    let (t, v) = refine_extremum(&f, &df, center - step, center + step, maximize);
    if (maximize && v > best) || (!maximize && v < best) {
        (t, v)
    } else {
        (center, best)
    }
}

/// Bisection on the derivative sign within `[lo, hi]`; falls back to ternary
/// search when the derivative does not bracket a sign change.
pub fn refine_extremum(
    f: &impl Fn(f64) -> f64,
    df: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    maximize: bool,
) -> (f64, f64) {
    // For a minimum we want df(lo) <= 0 <= df(hi); for a maximum, reversed.
    let sgn = if maximize { -1.0 } else { 1.0 };
    let (mut lo, mut hi) = (lo, hi);
    if sgn * df(lo) <= 0.0 && sgn * df(hi) >= 0.0 {
        for _ in 0..REFINE_STEPS {
            let mid = 0.5 * (lo + hi);
            if sgn * df(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        for _ in 0..REFINE_STEPS {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if sgn * f(m1) <= sgn * f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}
