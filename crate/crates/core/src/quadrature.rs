//! Adaptive composite Gauss–Legendre quadrature for complex-valued integrands
//! on a real interval.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Fixed `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n`, started from the Tricomi estimates.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * w;
        }
        acc * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureConfig {
    pub order: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { order: 32, rel_tol: 1e-12, abs_tol: 1e-15, max_depth: 20 }
    }
}

/// Bisects until the two-half estimate matches the whole-interval estimate.
pub fn adaptive<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let owned;
    let rule = if cfg.order == 32 {
        gl32()
    } else {
        owned = GaussLegendre::new(cfg.order);
        &owned
    };
    let whole = rule.integrate(f, a, b);
    let scale = whole.norm();
    recurse(f, rule, a, b, whole, scale, cfg, 0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> Complex64>(
    f: &F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: Complex64,
    scale: f64,
    cfg: &QuadratureConfig,
    depth: u32,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let left = rule.integrate(f, a, m);
    let right = rule.integrate(f, m, b);
    let sum = left + right;
    let diff = (sum - whole).norm();
    let scale = scale.max(sum.norm());
    if diff <= (cfg.rel_tol * scale).max(cfg.abs_tol) {
        return Ok(sum);
    }
    if !diff.is_finite() || depth >= cfg.max_depth {
        return Err(Error::Accuracy { achieved: diff / scale.max(f64::MIN_POSITIVE) });
    }
    let l = recurse(f, rule, a, m, left, scale, cfg, depth + 1)?;
    let r = recurse(f, rule, m, b, right, scale, cfg, depth + 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_integrate_polynomials() {
        let rule = GaussLegendre::new(32);
        let total: f64 = rule.weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // exact up to degree 63
        let f = |x: f64| Complex64::new(x.powi(62), x.powi(7));
        let v = rule.integrate(&f, -1.0, 1.0);
        assert!((v.re - 2.0 / 63.0).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
        let odd = GaussLegendre::new(5);
        assert!((odd.integrate(&|x: f64| Complex64::new(x * x, 0.0), 0.0, 3.0).re - 9.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_near_singular_integrand() {
        // ∫_0^1 1/(1.001 - s)^2 ds = 1/0.001 - 1/1.001
        let f = |s: f64| Complex64::new(1.0 / (1.001 - s).powi(2), 0.0);
        let v = adaptive(&f, 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        let exact = 1.0 / 0.001 - 1.0 / 1.001;
        assert!((v.re - exact).abs() / exact < 1e-11);
    }

    #[test]
    fn adaptive_reports_non_convergence() {
        let f = |s: f64| Complex64::new(1.0 / (s - 0.5), 0.0);
        let cfg = QuadratureConfig { max_depth: 3, ..Default::default() };
        assert!(matches!(adaptive(&f, 0.0, 1.0, &cfg), Err(Error::Accuracy { .. })));
    }
}
