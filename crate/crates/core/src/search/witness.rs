use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{ft_eval, ft_r_eval, qt_prime, qt_second, slit_rep_eval};
use crate::measures::SegmentMeasure;
use crate::optim::bisect;
use crate::region::{on_lens_boundary_arc, LENS_HEIGHT};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Residual bound every returned witness is re-verified against.
pub const WITNESS_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    CriticalPoint,
    Collision,
    Multivalence,
    Nonconvexity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub parameters: BTreeMap<String, f64>,
    pub points: Vec<[f64; 2]>,
    pub residuals: Vec<f64>,
}

impl WitnessReport {
    pub fn new(kind: WitnessKind) -> Self {
        Self { kind, parameters: BTreeMap::new(), points: Vec::new(), residuals: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn point(mut self, z: Complex64) -> Self {
        self.points.push([z.re, z.im]);
        self
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residuals.push(r);
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn q_of(z: Complex64) -> Complex64 {
    ((ONE + z) / (ONE - z)).powi(4)
}

/// The `t` for which `f_t'` vanishes at a point of a lens arc:
/// `t0 = 1/(1 - Q)`, `Q = ((1+z0)/(1-z0))⁴`.
pub fn critical_t_for_boundary_point(z0: Complex64) -> Result<f64> {
    if !on_lens_boundary_arc(z0)? {
        return Err(Error::Domain(format!("{z0} is not on a lens arc inside the disk")));
    }
    Ok(1.0 / (1.0 - q_of(z0).re))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledCritical {
    pub t: f64,
    pub r: f64,
    /// `|f_{t,R}'(z0)|`
    pub residual: f64,
}

impl ScaledCritical {
    pub fn report(&self, z0: Complex64) -> WitnessReport {
        WitnessReport::new(WitnessKind::CriticalPoint).param("t", self.t).param("R", self.r).point(z0).residual(self.residual)
    }
}

/// Distance beyond the lens along the ray through `z`: positive outside.
fn lens_excess(z: Complex64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    (z + i).norm().max((z - i).norm()) - SQRT_2
}

/// `(t, R)` with `R z0` on a lens arc and `f_{t,R}'(z0) = 0`, for `z0` in the
/// disk outside the lens. `R` comes from bisection along the ray.
pub fn scaled_critical_t(z0: Complex64) -> Result<ScaledCritical> {
    if !(z0.norm() <= 1.0) || z0.norm() == 0.0 {
        return Err(Error::Domain(format!("{z0} is not a nonzero point of the closed disk")));
    }
    if lens_excess(z0) < -1e-15 {
        return Err(Error::Domain(format!("the ray to {z0} does not leave the lens inside the disk")));
    }
    let r = bisect(|s| lens_excess(z0 * s), 0.0, 1.0, 1e-17, 200)?;
    let w = z0 * r;
    if w.re >= 1.0 - 1e-15 || w.re <= -1.0 + 1e-15 {
        return Err(Error::Domain(format!("the ray to {z0} meets the lens at a corner")));
    }
    let t = 1.0 / (1.0 - q_of(w).re);
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("no critical parameter for {z0}")));
    }
    let (_, d) = ft_r_eval(t, r, z0)?;
    Ok(ScaledCritical { t, r, residual: d.norm() })
}

/// `(1-λ)δ_{-1} + λδ_1` with `λ = sin²(α/2)`: the member of the class whose
/// slit-plane representation has a critical point at `e^{iα}`.
pub fn proposition_measure(alpha: f64) -> Result<SegmentMeasure> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, pi), got {alpha}")));
    }
    let lambda = (alpha / 2.0).sin().powi(2);
    two_atom(lambda)
}

/// `(1-λ)δ_{-1} + λδ_1`.
pub fn two_atom(lambda: f64) -> Result<SegmentMeasure> {
    SegmentMeasure::new(&[(-1.0, 1.0 - lambda), (1.0, lambda)])
}

/// `|F'(e^{iα})|` for the slit-plane representation `F` of `nu`.
pub fn proposition_residual(nu: &SegmentMeasure, alpha: f64) -> Result<f64> {
    Ok(slit_rep_eval(nu, Complex64::from_polar(1.0, alpha))?.1.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonconvexityWitness {
    pub a: Complex64,
    /// `|(1-λ) q_s'(a) + λ q_t'(a)|`
    pub residual: f64,
}

impl NonconvexityWitness {
    pub fn report(&self, s: f64, t: f64, lambda: f64) -> WitnessReport {
        WitnessReport::new(WitnessKind::Nonconvexity)
            .param("s", s)
            .param("t", t)
            .param("lambda", lambda)
            .point(self.a)
            .residual(self.residual)
    }
}

/// Root `a ∈ 𝔻 \ {0}` of `(1-λ) q_s'(a) + λ q_t'(a) = 0`, i.e. of
/// `q_s'(a)/q_t'(a) = -λ/(1-λ)`, by damped Newton from a polar grid of
/// seeds. Among the roots found, the one with the largest imaginary part
/// (then real part) is returned.
pub fn nonconvexity_witness(s: f64, t: f64, lambda: f64) -> Result<NonconvexityWitness> {
    if s == t || !(-1.0..=1.0).contains(&s) || !(-1.0..=1.0).contains(&t) || !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidInput(format!("need s != t in [-1, 1] and lambda in (0, 1), got {s}, {t}, {lambda}")));
    }
    let g = |z: Complex64| -> Result<(Complex64, Complex64)> {
        Ok((
            qt_prime(s, z)? * (1.0 - lambda) + qt_prime(t, z)? * lambda,
            qt_second(s, z)? * (1.0 - lambda) + qt_second(t, z)? * lambda,
        ))
    };
    let mut roots: Vec<NonconvexityWitness> = Vec::new();
    for ri in 1..=4 {
        for k in 0..16 {
            let seed = Complex64::from_polar(0.2 * ri as f64, PI * (k as f64 + 0.5) / 8.0);
            if let Some(a) = damped_newton(&g, seed, 1e-15) {
                if a.norm() < 1.0 - 1e-9 && a.norm() > 1e-9 {
                    let residual = g(a).map(|v| v.0.norm()).unwrap_or(f64::INFINITY);
                    if residual < 1e-10 && !roots.iter().any(|r| (r.a - a).norm() < 1e-8) {
                        roots.push(NonconvexityWitness { a, residual });
                    }
                }
            }
        }
    }
    roots
        .into_iter()
        .max_by(|x, y| x.a.im.total_cmp(&y.a.im).then(x.a.re.total_cmp(&y.a.re)))
        .ok_or_else(|| Error::SearchFailure(format!("no root in the disk for s={s}, t={t}, lambda={lambda}")))
}

/// Newton on an analytic `g` returning `(g, g')`, halving steps up to 40
/// times until `|g|` decreases and the iterate stays in the disk.
pub(crate) fn damped_newton<G>(g: &G, mut z: Complex64, tol: f64) -> Option<Complex64>
where
    G: Fn(Complex64) -> Result<(Complex64, Complex64)>,
{
    let (mut v, mut d) = g(z).ok()?;
    for _ in 0..100 {
        if v.norm() <= tol {
            return Some(z);
        }
        if d.norm() == 0.0 {
            return None;
        }
        let step = v / d;
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let cand = z - step * lambda;
            if cand.norm() < 1.0 {
                if let Ok((nv, nd)) = g(cand) {
                    if nv.norm() < v.norm() {
                        z = cand;
                        v = nv;
                        d = nd;
                        moved = true;
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (v.norm() <= 1e3 * tol.max(1e-13)).then_some(z)
}

/// Analytic upper-bound witnesses: `f_{t,R}` with a critical point at
/// `i(√2 - 1 + ε)`.
pub fn lens_critical_witness(eps: f64) -> Result<(ScaledCritical, Complex64)> {
    let z0 = Complex64::new(0.0, LENS_HEIGHT + eps);
    Ok((scaled_critical_t(z0)?, z0))
}

/// `|f_t'(z)|`, convenient for residual checks.
pub fn ft_derivative_norm(t: f64, z: Complex64) -> Result<f64> {
    Ok(ft_eval(t, z)?.1.norm())
}
