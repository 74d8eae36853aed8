//! The shear construction: from `p` (Herglotz sum over μ) and `F` (Robertson
//! sum over ν) build `f = h + conj(g)` with
//!
//! ```text
//! f(z) = Re ∫_0^z p(ζ) F'(ζ) dζ + i Im F(z),
//! h = ½ ∫ (p + 1) F',   g = ½ ∫ (p - 1) F'.
//! ```
//!
//! The same map is available two ways: as truncated Taylor series for `h` and
//! `g`, and by radial Gauss–Legendre quadrature of `p F'`. `Im f` is always
//! taken from the closed form of `F`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{circle_series, herglotz_eval, robertson_eval, segment_series};
use crate::measures::{CircleMeasure, SegmentMeasure};
use crate::quadrature::{adaptive, QuadratureConfig};
use crate::region::Region;
use crate::series::PowerSeries;

/// Evaluation closer than this to the unit circle is refused.
pub const MAX_EVAL_MODULUS: f64 = 0.999;

/// Below this modulus the truncated series is used by the hybrid evaluator.
pub const SERIES_RADIUS: f64 = 0.5;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A sheared harmonic map `k(·, p, F)`; immutable after construction.
#[derive(Debug, Clone)]
pub struct HarmonicMap {
    mu: CircleMeasure,
    nu: SegmentMeasure,
    h: PowerSeries,
    g: PowerSeries,
    quadrature: QuadratureConfig,
}

/// Values of `f`, `h` and `g` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapValue {
    pub f: Complex64,
    pub h: Complex64,
    pub g: Complex64,
}

/// Builds `k(·, p, F)` with series truncated at `order`.
pub fn shear(mu: &CircleMeasure, nu: &SegmentMeasure, order: usize) -> Result<HarmonicMap> {
    if order < 2 {
        return Err(Error::InvalidInput(format!("series order must be at least 2, got {order}")));
    }
    let p = circle_series(mu, order);
    let f_prime = segment_series(nu, order).derivative();
    let one = PowerSeries::one(order);
    let h = (&p + &one).mul(&f_prime).scale(Complex64::new(0.5, 0.0)).antiderivative();
    let g = (&p - &one).mul(&f_prime).scale(Complex64::new(0.5, 0.0)).antiderivative();
    Ok(HarmonicMap { mu: mu.clone(), nu: nu.clone(), h, g, quadrature: QuadratureConfig::default() })
}

impl HarmonicMap {
    pub fn mu(&self) -> &CircleMeasure {
        &self.mu
    }

    pub fn nu(&self) -> &SegmentMeasure {
        &self.nu
    }

    pub fn h_series(&self) -> &PowerSeries {
        &self.h
    }

    pub fn g_series(&self) -> &PowerSeries {
        &self.g
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quadrature
    }

    pub fn with_quadrature(mut self, cfg: QuadratureConfig) -> Self {
        self.quadrature = cfg;
        self
    }

    /// `p(z)`
    pub fn p(&self, z: Complex64) -> Result<Complex64> {
        herglotz_eval(&self.mu, z)
    }

    /// `(F(z), F'(z))`
    pub fn analytic_part(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        robertson_eval(&self.nu, z)
    }

    /// `(h'(z), g'(z)) = (½(p+1)F', ½(p-1)F')`.
    pub fn derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let p = self.p(z)?;
        let (_, fp) = self.analytic_part(z)?;
        Ok(((p + ONE) * fp * 0.5, (p - ONE) * fp * 0.5))
    }

    /// `f`, `h`, `g` by adaptive quadrature of `p F'` along `[0, z]`.
    pub fn eval_quadrature(&self, z: Complex64) -> Result<MapValue> {
        if !z.is_finite() || z.norm() > MAX_EVAL_MODULUS {
            return Err(Error::Accuracy { achieved: f64::INFINITY });
        }
        if z == Complex64::new(0.0, 0.0) {
            let zero = Complex64::new(0.0, 0.0);
            return Ok(MapValue { f: zero, h: zero, g: zero });
        }
        let integrand = |s: f64| {
            let w = z * s;
            match (self.p(w), self.analytic_part(w)) {
                (Ok(p), Ok((_, fp))) => z * p * fp,
                _ => Complex64::new(f64::NAN, f64::NAN),
            }
        };
        let integral = adaptive(&integrand, 0.0, 1.0, &self.quadrature)?;
        let (big_f, _) = self.analytic_part(z)?;
        Ok(MapValue {
            f: Complex64::new(integral.re, big_f.im),
            h: (integral + big_f) * 0.5,
            g: (integral - big_f) * 0.5,
        })
    }

    /// `f`, `h`, `g` from the truncated series; accurate for small `|z|`.
    pub fn eval_series(&self, z: Complex64) -> MapValue {
        let h = self.h.eval(z);
        let g = self.g.eval(z);
        MapValue { f: h + g.conj(), h, g }
    }

    /// Series inside [`SERIES_RADIUS`], quadrature beyond; `Im f` is exact.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() <= SERIES_RADIUS {
            let (big_f, _) = self.analytic_part(z)?;
            let v = self.eval_series(z);
            Ok(Complex64::new(v.f.re, big_f.im))
        } else {
            Ok(self.eval_quadrature(z)?.f)
        }
    }

    /// `J_f = |F'|² Re p`.
    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        let p = self.p(z)?;
        let (_, fp) = self.analytic_part(z)?;
        Ok(fp.norm_sqr() * p.re)
    }

    /// `J_f = |h'|² - |g'|²` with `h' = F'/(1 - ω)` and `g' = ω h'`.
    pub fn jacobian_from_dilatation(&self, z: Complex64) -> Result<f64> {
        let omega = self.dilatation(z)?;
        let (_, fp) = self.analytic_part(z)?;
        let hp = fp / (ONE - omega);
        let gp = omega * hp;
        Ok(hp.norm_sqr() - gp.norm_sqr())
    }

    /// Second complex dilatation `ω = (p - 1)/(p + 1) = g'/h'`.
    pub fn dilatation(&self, z: Complex64) -> Result<Complex64> {
        let p = self.p(z)?;
        Ok((p - ONE) / (p + ONE))
    }
}

/// Recovers `F = h - g` and `p = (h' + g')/(h' - g')` from the series of a
/// harmonic map.
pub fn decompose(h: &PowerSeries, g: &PowerSeries) -> Result<(PowerSeries, PowerSeries)> {
    let big_f = h - g;
    let hp = h.derivative();
    let gp = g.derivative();
    let p = (&hp + &gp).div(&(&hp - &gp))?;
    Ok((big_f, p))
}

type Derivative = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Arbitrary `f = h + conj(g)` given through `h'` and `g'`; used for maps that
/// do not come out of the shear construction.
pub struct GenericHarmonicInput {
    pub hprime: Derivative,
    pub gprime: Derivative,
}

impl GenericHarmonicInput {
    pub fn new(
        hprime: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        gprime: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { hprime: Box::new(hprime), gprime: Box::new(gprime) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SenseScan {
    pub passed: bool,
    pub points_checked: usize,
    /// Largest `|g'/h'|` over points where `h'` does not vanish.
    pub max_ratio: f64,
    pub witness: Option<Complex64>,
}

/// `|h'|` below this is treated as a zero of `h'`.
const H_ZERO: f64 = 1e-8;

/// Checks `|g'| < |h'|` on an `n × n` grid of the region, plus the region
/// center. At zeros of `h'` the ratio `|g'/h'|` is sampled on a small circle
/// to decide whether the singularity of `ω` is removable with `|ω| < 1`.
pub fn sense_preserving_scan(input: &GenericHarmonicInput, region: &Region, n: usize) -> SenseScan {
    let mut points = region.grid(n.max(2));
    points.insert(0, region.center());
    let mut max_ratio: f64 = 0.0;
    for (checked, &z) in points.iter().enumerate() {
        let hp = (input.hprime)(z);
        let gp = (input.gprime)(z);
        let failed = if hp.norm() > H_ZERO {
            let ratio = gp.norm() / hp.norm();
            max_ratio = max_ratio.max(ratio);
            ratio >= 1.0
        } else {
            // ratio limit at a zero of h'
            let rho = 1e-4;
            (0..32).any(|k| {
                let w = z + Complex64::from_polar(rho, std::f64::consts::TAU * k as f64 / 32.0);
                let (a, b) = ((input.hprime)(w), (input.gprime)(w));
                a.norm() <= H_ZERO || b.norm() >= a.norm()
            })
        };
        if failed {
            return SenseScan { passed: false, points_checked: checked + 1, max_ratio, witness: Some(z) };
        }
    }
    SenseScan { passed: true, points_checked: points.len(), max_ratio, witness: None }
}
