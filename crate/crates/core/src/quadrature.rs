//! Gauss–Legendre rules, periodic trapezoid rules and adaptive integration.

use alloc::vec::Vec;

use crate::real::{cos, fabs, PI};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    /// Abscissae, increasing.
    pub nodes: Vec<f64>,
    /// Positive weights.
    pub weights: Vec<f64>,
}

impl Rule {
    /// Gauss–Legendre on `[a, b]`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Rule {
        let (x, w) = gauss_legendre_unit(n);
        let (h, m) = ((b - a) / 2.0, (a + b) / 2.0);
        Rule {
            nodes: x.iter().map(|t| m + h * t).collect(),
            weights: w.iter().map(|v| v * h).collect(),
        }
    }

    /// Equal-weight trapezoid rule for a `period`-periodic integrand on
    /// `[a, a + period)`.
    pub fn periodic(n: usize, a: f64, period: f64) -> Rule {
        let h = period / n as f64;
        Rule { nodes: (0..n).map(|i| a + h * i as f64).collect(), weights: alloc::vec![h; n] }
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True for the empty rule.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if fabs(dt) < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
}

/// Result of [`adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive {
    /// Integral estimate.
    pub value: f64,
    /// Sum of local differences between the 10- and 20-point rules.
    pub error: f64,
    /// Integrand evaluations.
    pub evaluations: usize,
}

/// Adaptive bisection comparing 10- and 20-point Gauss–Legendre on each piece
/// until the local difference is below `tol · width / (b − a)`.
pub fn adaptive(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> Adaptive {
    let (x10, w10) = gauss_legendre_unit(10);
    let (x20, w20) = gauss_legendre_unit(20);
    let mut out = Adaptive { value: 0.0, error: 0.0, evaluations: 0 };
    let mut stack: Vec<(f64, f64, u32)> = alloc::vec![(a, b, 0)];
    let total = fabs(b - a);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (h, m) = ((hi - lo) / 2.0, (hi + lo) / 2.0);
        let coarse: f64 = x10.iter().zip(&w10).map(|(t, w)| w * f(m + h * t)).sum::<f64>() * h;
        let fine: f64 = x20.iter().zip(&w20).map(|(t, w)| w * f(m + h * t)).sum::<f64>() * h;
        out.evaluations += 30;
        let err = fabs(fine - coarse);
        if err <= tol * fabs(hi - lo) / total || depth >= max_depth {
            out.value += fine;
            out.error += err;
        } else {
            stack.push((m, hi, depth + 1));
            stack.push((lo, m, depth + 1));
        }
    }
    out
}
