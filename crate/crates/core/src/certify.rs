//! Resolution-limited geometric certifiers.
//!
//! A `CERTIFIED_AT_RESOLUTION` verdict means that the sampled boundary image
//! is a simple closed polyline winding once around the images of interior
//! probes. It is evidence, not proof, and always records the resolution.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{self, HitKind};
use crate::maps::{AnalyticMap, PlaneMap};
use crate::optim::{bisect, nelder_mead, NelderMeadConfig};
use crate::region::{Polyline, Region};
use crate::shear::HarmonicMap;

/// Minimum separation of the two points of a collision witness.
pub const DELTA_Z: f64 = 1e-3;

/// Collision threshold relative to the boundary-image scale.
pub const DELTA_W_REL: f64 = 1e-9;

pub const MIN_RESOLUTION: usize = 256;

pub const PROBE_COUNT: usize = 16;

/// Hits inspected for collision refinement before giving up.
const MAX_REFINED_HITS: usize = 24;

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    CertifiedAtResolution,
    Collision,
    Inconclusive,
}

/// Two distinct points with (numerically) equal images.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_complex")]
    pub z1: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub z2: Complex64,
    /// `|f(z1) - f(z2)|`
    pub df: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExcludedCorner {
    #[serde(serialize_with = "ser_complex")]
    pub corner: Complex64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Smallest `|J_f|` over the contour samples.
    pub min_abs_jacobian: f64,
    /// Winding numbers about the probe images; `None` when a probe image
    /// lies on the curve.
    pub windings: Vec<Option<i64>>,
    pub exclusion_radius: f64,
    pub excluded: Vec<ExcludedCorner>,
    /// Largest modulus of the boundary image.
    pub scale: f64,
    pub self_intersections: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnivalenceVerdict {
    pub outcome: Outcome,
    pub resolution: usize,
    pub witness: Option<Witness>,
    pub diagnostics: Diagnostics,
}

impl UnivalenceVerdict {
    pub fn is_certified(&self) -> bool {
        self.outcome == Outcome::CertifiedAtResolution
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckResult {
    pub passed: bool,
    pub checked: usize,
    #[serde(serialize_with = "ser_opt_complex")]
    pub witness: Option<Complex64>,
}

fn ser_opt_complex<S: Serializer>(z: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

/// `Im f(z)` shares the sign of `Im z` off the axis (`|Im z| > 1e-6`) and
/// `|Im f(x)| < 1e-9` at real grid points.
pub fn typical_reality_check(f: &dyn PlaneMap, grid: &[Complex64]) -> Result<CheckResult> {
    let results: Vec<Result<bool>> = grid
        .par_iter()
        .map(|&z| {
            let w = f.eval(z)?;
            Ok(if z.im == 0.0 {
                w.im.abs() < 1e-9
            } else if z.im.abs() > 1e-6 {
                w.im != 0.0 && w.im.signum() == z.im.signum()
            } else {
                true
            })
        })
        .collect();
    for (k, r) in results.into_iter().enumerate() {
        if !r? {
            return Ok(CheckResult { passed: false, checked: k + 1, witness: Some(grid[k]) });
        }
    }
    Ok(CheckResult { passed: true, checked: grid.len(), witness: None })
}

/// Polar grid in the disk of radius `r_max`: `radii × angles` points plus
/// `2·radii + 1` points on the real diameter.
pub fn polar_grid(radii: usize, angles: usize, r_max: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(radii * (angles + 2) + 1);
    out.push(Complex64::new(0.0, 0.0));
    for i in 1..=radii {
        let r = r_max * i as f64 / radii as f64;
        out.push(Complex64::new(r, 0.0));
        out.push(Complex64::new(-r, 0.0));
        for j in 0..angles {
            let theta = std::f64::consts::TAU * (j as f64 + 0.5) / angles as f64;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

/// `Re f` strictly increasing at `count` equispaced points of `(-x_max, x_max)`.
pub fn real_monotonicity_check(f: &dyn PlaneMap, count: usize, x_max: f64) -> Result<CheckResult> {
    let xs: Vec<f64> = (0..count).map(|k| -x_max + 2.0 * x_max * (k as f64 + 1.0) / (count as f64 + 1.0)).collect();
    let mut prev: Option<f64> = None;
    for (k, &x) in xs.iter().enumerate() {
        let v = f.eval(Complex64::new(x, 0.0))?.re;
        if let Some(p) = prev {
            if v <= p {
                return Ok(CheckResult { passed: false, checked: k + 1, witness: Some(Complex64::new(x, 0.0)) });
            }
        }
        prev = Some(v);
    }
    Ok(CheckResult { passed: true, checked: count, witness: None })
}

fn in_closure(region: &Region, z: Complex64) -> bool {
    let c = region.center();
    region.contains(z) || region.contains(c + (z - c) * (1.0 - 1e-9))
}

/// Real 2×2 differential of `f` at `z` as the complex columns `(∂f/∂x, ∂f/∂y)`.
fn differential(f: &dyn PlaneMap, z: Complex64) -> Result<(Complex64, Complex64)> {
    let (hp, gp) = f.derivatives(z)?;
    let i = Complex64::new(0.0, 1.0);
    Ok((hp + gp.conj(), i * (hp - gp.conj())))
}

fn cdot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

fn admissible(f: &dyn PlaneMap, region: &Region, z: Complex64) -> bool {
    z.norm() <= f.max_modulus() && in_closure(region, z)
}

/// Pulls `z` radially towards the region center until it is admissible.
fn project(f: &dyn PlaneMap, region: &Region, z: Complex64) -> Option<Complex64> {
    if admissible(f, region, z) {
        return Some(z);
    }
    let c = region.center();
    if !admissible(f, region, c) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if admissible(f, region, c + (z - c) * mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(c + (z - c) * lo)
}

/// Damped minimal-norm Gauss–Newton on `f(z1) - f(z2) = 0`. Iterates are
/// projected back into the closure of the region and kept more than
/// `DELTA_Z` apart. Stops once the residual is below `1e-14` relative to
/// the image values.
fn polish_pair(f: &dyn PlaneMap, region: &Region, mut z1: Complex64, mut z2: Complex64) -> (Complex64, Complex64, f64) {
    let residual = |a: Complex64, b: Complex64| -> Option<Complex64> { Some(f.eval(a).ok()? - f.eval(b).ok()?) };
    let Some(mut r) = residual(z1, z2) else {
        return (z1, z2, f64::INFINITY);
    };
    for _ in 0..80 {
        let target = 1e-14 * f.eval(z1).map(|w| w.norm()).unwrap_or(0.0).max(1.0);
        if r.norm() <= target {
            break;
        }
        let (Ok((ax, ay)), Ok((bx, by))) = (differential(f, z1), differential(f, z2)) else {
            break;
        };
        let cols = [ax, ay, -bx, -by];
        let (mut m11, mut m12, mut m22) = (0.0, 0.0, 0.0);
        for col in cols {
            m11 += col.re * col.re;
            m12 += col.re * col.im;
            m22 += col.im * col.im;
        }
        let det = m11 * m22 - m12 * m12;
        if !(det.abs() > 1e-300) {
            break;
        }
        let y = Complex64::new((m22 * r.re - m12 * r.im) / det, (m11 * r.im - m12 * r.re) / det);
        let step: Vec<f64> = cols.iter().map(|&col| -cdot(col, y)).collect();
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let cand = (
                project(f, region, z1 + Complex64::new(step[0], step[1]) * lambda),
                project(f, region, z2 + Complex64::new(step[2], step[3]) * lambda),
            );
            if let (Some(n1), Some(n2)) = cand {
                if (n1 - n2).norm() > DELTA_Z {
                    if let Some(nr) = residual(n1, n2) {
                        if nr.norm() < r.norm() {
                            z1 = n1;
                            z2 = n2;
                            r = nr;
                            improved = true;
                            break;
                        }
                    }
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (z1, z2, r.norm())
}

/// Largest modulus of the image of 256 boundary samples.
pub fn boundary_scale(f: &dyn PlaneMap, region: &Region) -> f64 {
    let region = region.within_modulus(f.max_modulus());
    region
        .boundary(256)
        .points()
        .iter()
        .filter_map(|&z| f.eval(z).ok())
        .map(|w| w.norm())
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
}

fn verified(f: &dyn PlaneMap, region: &Region, z1: Complex64, z2: Complex64, scale: f64) -> Option<Witness> {
    if !(in_closure(region, z1) && in_closure(region, z2)) || (z1 - z2).norm() <= DELTA_Z {
        return None;
    }
    let df = (f.eval(z1).ok()? - f.eval(z2).ok()?).norm();
    (df < DELTA_W_REL * scale).then_some(Witness { z1, z2, df })
}

fn search_with_scale(f: &dyn PlaneMap, region: &Region, seeds: &[(Complex64, Complex64)], scale: f64) -> Option<Witness> {
    for &(s1, s2) in seeds {
        if !(in_closure(region, s1) && in_closure(region, s2)) {
            continue;
        }
        let (z1, z2, _) = polish_pair(f, region, s1, s2);
        if let Some(w) = verified(f, region, z1, z2, scale) {
            return Some(w);
        }
        let objective = |x: &[f64]| -> f64 {
            let a = Complex64::new(x[0], x[1]);
            let b = Complex64::new(x[2], x[3]);
            let dz = (a - b).norm();
            if !(in_closure(region, a) && in_closure(region, b)) || dz <= DELTA_Z {
                return f64::INFINITY;
            }
            match (f.eval(a), f.eval(b)) {
                (Ok(fa), Ok(fb)) => (fa - fb).norm_sqr() / (dz * dz),
                _ => f64::INFINITY,
            }
        };
        let step = 0.05 * (s1 - s2).norm().max(DELTA_Z);
        let cfg = NelderMeadConfig { initial_step: step, max_iter: 4000, x_tol: 1e-14, f_tol: 0.0 };
        let m = nelder_mead(objective, &[s1.re, s1.im, s2.re, s2.im], &cfg);
        let (a, b) = (Complex64::new(m.x[0], m.x[1]), Complex64::new(m.x[2], m.x[3]));
        let (z1, z2, _) = polish_pair(f, region, a, b);
        if let Some(w) = verified(f, region, z1, z2, scale) {
            return Some(w);
        }
    }
    None
}

/// Minimizes `|f(z1) - f(z2)|` from each seed pair, first by Gauss–Newton
/// polishing and then by simplex descent on `|Δf|²/|Δz|²` followed by
/// another polish. Returns the first pair meeting the witness thresholds.
pub fn collision_search(f: &dyn PlaneMap, region: &Region, seeds: &[(Complex64, Complex64)]) -> Option<Witness> {
    let scale = boundary_scale(f, region);
    if !(scale > 0.0) {
        return None;
    }
    search_with_scale(f, region, seeds, scale)
}

#[derive(Debug, Clone, Default)]
pub struct CertifyOptions {
    /// Extra seed pairs tried by collision refinement, whatever the
    /// boundary test says.
    pub seeds: Vec<(Complex64, Complex64)>,
}

/// Boundary-injectivity certification of `f` on `region` at resolution `n`.
pub fn boundary_univalence_certify(f: &dyn PlaneMap, region: &Region, n: usize) -> Result<UnivalenceVerdict> {
    boundary_univalence_certify_with(f, region, n, &CertifyOptions::default())
}

pub fn boundary_univalence_certify_with(f: &dyn PlaneMap, region: &Region, n: usize, opts: &CertifyOptions) -> Result<UnivalenceVerdict> {
    if n < MIN_RESOLUTION {
        return Err(Error::InvalidInput(format!("resolution must be at least {MIN_RESOLUTION}, got {n}")));
    }
    let region = region.within_modulus(f.max_modulus());
    let contour = region.contour(n);
    let values: Vec<(Complex64, f64)> = contour
        .points
        .par_iter()
        .map(|&z| Ok((f.eval(z)?, f.jacobian(z)?.abs())))
        .collect::<Result<_>>()?;

    let mut zs = Vec::with_capacity(values.len());
    let mut ws = Vec::with_capacity(values.len());
    for (&z, &(w, _)) in contour.points.iter().zip(&values) {
        if ws.last() != Some(&w) {
            zs.push(z);
            ws.push(w);
        }
    }
    while ws.len() > 1 && ws.first() == ws.last() {
        ws.pop();
        zs.pop();
    }
    let image = Polyline::new(ws.clone(), true);
    let scale = image.max_modulus();
    let hits = geometry::self_intersections(&image, MAX_REFINED_HITS);

    let mut diagnostics = Diagnostics {
        min_abs_jacobian: values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min),
        windings: Vec::new(),
        exclusion_radius: region.exclusion_radius,
        excluded: contour.excluded.iter().map(|&(corner, radius)| ExcludedCorner { corner, radius }).collect(),
        scale,
        self_intersections: hits.len(),
        note: String::new(),
    };
    let verdict = |outcome, witness, diagnostics| UnivalenceVerdict { outcome, resolution: n, witness, diagnostics };

    let m = zs.len();
    let mut seeds: Vec<(Complex64, Complex64)> = hits
        .iter()
        .map(|h| {
            let at = |k: usize, t: f64| zs[k] + (zs[(k + 1) % m] - zs[k]) * t;
            (at(h.i, h.s), at(h.j, h.u))
        })
        .collect();
    seeds.extend(opts.seeds.iter().copied());
    if !seeds.is_empty() {
        if let Some(w) = search_with_scale(f, &region, &seeds, scale) {
            diagnostics.note = "collision witness re-verified by direct evaluation".into();
            return Ok(verdict(Outcome::Collision, Some(w), diagnostics));
        }
    }
    if !hits.is_empty() {
        let touching = hits.iter().filter(|h| h.kind == HitKind::Touch).count();
        diagnostics.note = format!(
            "{} boundary self-intersection(s) ({} touching) without a confirmed collision",
            hits.len(),
            touching
        );
        return Ok(verdict(Outcome::Inconclusive, None, diagnostics));
    }

    let probes = region.interior_probes(PROBE_COUNT);
    let windings: Vec<Option<i64>> = probes
        .par_iter()
        .map(|&z| f.eval(z).ok().and_then(|w| geometry::winding_number(&image, w)))
        .collect();
    let ok = windings.iter().all(|w| *w == Some(1));
    diagnostics.windings = windings;
    if ok {
        diagnostics.note = "simple boundary image with winding 1 about all probe images".into();
        Ok(verdict(Outcome::CertifiedAtResolution, None, diagnostics))
    } else {
        diagnostics.note = "simple boundary image but a probe winding differs from 1".into();
        Ok(verdict(Outcome::Inconclusive, None, diagnostics))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalScan {
    pub min_jacobian: f64,
    pub min_abs_jacobian: f64,
    #[serde(serialize_with = "ser_complex")]
    pub argmin: Complex64,
    pub points: usize,
    /// Located zeros of the Jacobian, accurate to about 1e-8.
    #[serde(serialize_with = "ser_complex_vec")]
    pub critical_points: Vec<Complex64>,
}

fn ser_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

/// Jacobian over an `n × n` lattice of the region. Cells where `J` changes
/// sign are bisected, and lattice local minima of `|J|` that are small
/// compared with the typical `|J|` are refined by simplex descent on
/// `√|J|`; refined points where `J` (nearly) vanishes are reported.
pub fn local_univalence_scan(f: &dyn PlaneMap, region: &Region, n: usize) -> Result<LocalScan> {
    if n < 100 {
        return Err(Error::InvalidInput(format!("scan grid must be at least 100, got {n}")));
    }
    let region = region.within_modulus(f.max_modulus());
    let (lo, hi) = region.bounding_box();
    let at = |i: usize, j: usize| {
        Complex64::new(
            lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / n as f64,
            lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / n as f64,
        )
    };
    let lattice: Vec<Option<f64>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let z = at(k / n, k % n);
            if region.contains(z) {
                f.jacobian(z).ok()
            } else {
                None
            }
        })
        .collect();
    let get = |i: isize, j: isize| -> Option<f64> {
        if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
            None
        } else {
            lattice[i as usize * n + j as usize]
        }
    };

    let mut min_j = f64::INFINITY;
    let mut min_abs = f64::INFINITY;
    let mut argmin = region.center();
    let mut abs_values = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if let Some(v) = lattice[i * n + j] {
                abs_values.push(v.abs());
                if v < min_j {
                    min_j = v;
                }
                if v.abs() < min_abs {
                    min_abs = v.abs();
                    argmin = at(i, j);
                }
            }
        }
    }
    if abs_values.is_empty() {
        return Err(Error::Degenerate("no lattice point of the scan lies in the region".into()));
    }
    abs_values.sort_by(f64::total_cmp);
    let typical = abs_values[abs_values.len() / 2].max(f64::MIN_POSITIVE);
    let spacing = ((hi.re - lo.re) / n as f64).max((hi.im - lo.im) / n as f64);

    let mut critical: Vec<Complex64> = Vec::new();
    let mut push = |z: Complex64| {
        if !critical.iter().any(|c| (c - z).norm() < 1e-6) {
            critical.push(z);
        }
    };
    for i in 0..n as isize {
        for j in 0..n as isize {
            let Some(v) = get(i, j) else { continue };
            for (di, dj) in [(1, 0), (0, 1)] {
                if let Some(w) = get(i + di, j + dj) {
                    if v.signum() != w.signum() {
                        let a = at(i as usize, j as usize);
                        let b = at((i + di) as usize, (j + dj) as usize);
                        let jac = |t: f64| f.jacobian(a + (b - a) * t).unwrap_or(f64::NAN);
                        if let Ok(t) = bisect(jac, 0.0, 1.0, 1e-9 / spacing, 200) {
                            push(a + (b - a) * t);
                        }
                    }
                }
            }
            let is_local_min = (-1..=1).all(|di| {
                (-1..=1).all(|dj| (di == 0 && dj == 0) || get(i + di, j + dj).is_none_or(|w| v.abs() <= w.abs()))
            });
            if is_local_min && v.abs().sqrt() < 0.1 * typical.sqrt() {
                let objective = |x: &[f64]| {
                    let z = Complex64::new(x[0], x[1]);
                    if !region.contains(z) && !in_closure(&region, z) {
                        return f64::INFINITY;
                    }
                    f.jacobian(z).map(|v| v.abs().sqrt()).unwrap_or(f64::INFINITY)
                };
                let z0 = at(i as usize, j as usize);
                let cfg = NelderMeadConfig { initial_step: 0.5 * spacing, max_iter: 4000, x_tol: 1e-13, f_tol: 0.0 };
                let m = nelder_mead(objective, &[z0.re, z0.im], &cfg);
                if m.value < 1e-6 * typical.sqrt().max(1.0) {
                    push(Complex64::new(m.x[0], m.x[1]));
                }
            }
        }
    }
    Ok(LocalScan { min_jacobian: min_j, min_abs_jacobian: min_abs, argmin, points: abs_values.len(), critical_points: critical })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityCheck {
    pub passed: bool,
    pub lines: usize,
    pub max_crossings: usize,
    /// Offset of the first test line with more than two crossings.
    pub witness_offset: Option<f64>,
}

pub const CONVEXITY_LINES: usize = 512;

/// Every line in `direction` over 512 offsets spanning the image meets the
/// closed polyline in at most two transversal points. Vertices within 1e-9
/// (relative to the image size) of a line count as on it, so tangential
/// grazes are not crossings.
pub fn direction_convexity_check(image: &Polyline, direction: Direction) -> Result<ConvexityCheck> {
    if !image.is_closed() || image.len() < 3 {
        return Err(Error::InvalidInput("direction convexity needs a closed polyline".into()));
    }
    if !geometry::is_simple(image) {
        return Err(Error::InvalidInput("direction convexity needs a simple polyline".into()));
    }
    let coord = |z: &Complex64| match direction {
        Direction::Horizontal => z.im,
        Direction::Vertical => z.re,
    };
    let vals: Vec<f64> = image.points().iter().map(coord).collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let graze = 1e-9 * image.max_modulus().max(hi - lo).max(f64::MIN_POSITIVE);
    let mut max_crossings = 0;
    let mut witness_offset = None;
    for k in 0..CONVEXITY_LINES {
        let c = lo + (hi - lo) * (k as f64 + 0.5) / CONVEXITY_LINES as f64;
        let signs: Vec<i8> = vals
            .iter()
            .filter_map(|&v| {
                let d = v - c;
                if d.abs() <= graze {
                    None
                } else {
                    Some(if d > 0.0 { 1 } else { -1 })
                }
            })
            .collect();
        let crossings = if signs.is_empty() {
            0
        } else {
            (0..signs.len()).filter(|&i| signs[i] != signs[(i + 1) % signs.len()]).count()
        };
        if crossings > max_crossings {
            max_crossings = crossings;
        }
        if crossings > 2 && witness_offset.is_none() {
            witness_offset = Some(c);
        }
    }
    Ok(ConvexityCheck { passed: witness_offset.is_none(), lines: CONVEXITY_LINES, max_crossings, witness_offset })
}

/// Image of the region contour under `f`, as a closed polyline.
pub fn image_polyline(f: &dyn PlaneMap, region: &Region, n: usize) -> Result<Polyline> {
    let region = region.within_modulus(f.max_modulus());
    let pts: Vec<Complex64> = region.contour(n).points.par_iter().map(|&z| f.eval(z)).collect::<Result<_>>()?;
    Ok(Polyline::new(pts, true))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarlikeCheck {
    pub passed: bool,
    pub radius: f64,
    pub points: usize,
    /// Smallest `Re(z f'(z)/f(z))` on the circle.
    pub min_value: f64,
    #[serde(serialize_with = "ser_complex")]
    pub argmin: Complex64,
    /// Circle points where `|Re(z f'/f)| < 1e-6`.
    #[serde(serialize_with = "ser_complex_vec")]
    pub near_zero: Vec<Complex64>,
}

pub const STARLIKE_POINTS: usize = 2048;

/// `Re(z f'(z)/f(z)) >= -1e-9` at 2048 points of `|z| = r`.
pub fn starlike_boundary_check(f: &dyn PlaneMap, r: f64) -> Result<StarlikeCheck> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidInput(format!("radius must lie in (0, 1), got {r}")));
    }
    let mut min_value = f64::INFINITY;
    let mut argmin = Complex64::new(r, 0.0);
    let mut near_zero = Vec::new();
    for k in 0..STARLIKE_POINTS {
        let z = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / STARLIKE_POINTS as f64);
        let w = f.eval(z)?;
        if w.norm() < 1e-300 {
            return Err(Error::Degenerate(format!("f vanishes at {z} on the circle")));
        }
        let (hp, _) = f.derivatives(z)?;
        let v = (z * hp / w).re;
        if v < min_value {
            min_value = v;
            argmin = z;
        }
        if v.abs() < 1e-6 {
            near_zero.push(z);
        }
    }
    Ok(StarlikeCheck { passed: min_value >= -1e-9, radius: r, points: STARLIKE_POINTS, min_value, argmin, near_zero })
}

/// Certification of a map on a region together with horizontal convexity of
/// its boundary image.
pub fn certified_chd(f: &dyn PlaneMap, region: &Region, n: usize) -> Result<bool> {
    let verdict = boundary_univalence_certify(f, region, n)?;
    if !verdict.is_certified() {
        return Ok(false);
    }
    let image = image_polyline(f, region, n)?;
    Ok(direction_convexity_check(&image, Direction::Horizontal)?.passed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShearEquivalence {
    pub harmonic: bool,
    pub analytic: bool,
}

impl ShearEquivalence {
    pub fn consistent(&self) -> bool {
        self.harmonic == self.analytic
    }
}

/// Certified-and-CHD status of a sheared map and of its analytic part
/// `F = h - g` on the same region and resolution.
pub fn shear_equivalence(map: &HarmonicMap, region: &Region, n: usize) -> Result<ShearEquivalence> {
    let analytic = AnalyticMap::robertson(map.nu().clone());
    Ok(ShearEquivalence { harmonic: certified_chd(map, region, n)?, analytic: certified_chd(&analytic, region, n)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapRegistry;
    use std::f64::consts::{PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reality_check_controls() {
        let reg = MapRegistry::default();
        let grid = polar_grid(20, 40, 0.95);
        assert!(typical_reality_check(&*reg.build("identity").unwrap(), &grid).unwrap().passed);
        for t in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            let q = reg.build(&format!("qt:t={t}")).unwrap();
            assert!(typical_reality_check(&*q, &grid).unwrap().passed);
        }
        let sq = typical_reality_check(&*reg.build("square").unwrap(), &grid).unwrap();
        assert!(!sq.passed);
        let w = sq.witness.unwrap();
        assert!(w.im > 0.0 && (w * w).im < 0.0);
        let at = Complex64::from_polar(0.5, 0.75 * PI);
        let r = typical_reality_check(&*reg.build("square").unwrap(), &[c(0.3, 0.0), at]).unwrap();
        assert_eq!(r.witness, Some(at));
    }

    #[test]
    fn identity_and_koebe_certify() {
        let reg = MapRegistry::default();
        let v = boundary_univalence_certify(&*reg.build("identity").unwrap(), &Region::centered_disk(0.9).unwrap(), 512).unwrap();
        assert_eq!(v.outcome, Outcome::CertifiedAtResolution);
        assert!(v.diagnostics.windings.iter().all(|w| *w == Some(1)));
        let k = boundary_univalence_certify(&*reg.build("koebe").unwrap(), &Region::lens(), 1024).unwrap();
        assert!(k.is_certified(), "{k:?}");
        assert_eq!(k.diagnostics.excluded.len(), 2);
        assert!(boundary_univalence_certify(&*reg.build("koebe").unwrap(), &Region::lens(), 100).is_err());
    }

    #[test]
    fn square_on_offset_disk_collides() {
        let reg = MapRegistry::default();
        let sq = reg.build("square").unwrap();
        let v = boundary_univalence_certify(&*sq, &Region::centered_disk(0.5).unwrap(), 512).unwrap();
        assert_eq!(v.outcome, Outcome::Collision);
        let w = v.witness.unwrap();
        assert!((w.z1 - w.z2).norm() > DELTA_Z);
        assert!(w.df < DELTA_W_REL * v.diagnostics.scale);
        let json = v.to_json();
        assert!(json.starts_with("{\"outcome\":\"COLLISION\",\"resolution\":512,\"witness\":{\"z1\":["));
    }

    #[test]
    fn goodman_collision_from_seed() {
        let reg = MapRegistry::default();
        let g = reg.build("goodman").unwrap();
        let z0 = c(1.0, SQRT_2) / 3.0;
        let region = Region::centered_disk(1.0 / 3f64.sqrt() + 0.01).unwrap();
        let w = collision_search(&*g, &region, &[(z0, -z0.conj())]).unwrap();
        assert!(w.df < 1e-9);
        let id = reg.build("identity").unwrap();
        assert!(collision_search(&*id, &region, &[(c(0.1, 0.1), c(-0.2, 0.3))]).is_none());
    }

    #[test]
    fn local_scan_finds_critical_point_of_f_half() {
        let reg = MapRegistry::default();
        let id = local_univalence_scan(&*reg.build("identity").unwrap(), &Region::centered_disk(0.5).unwrap(), 100).unwrap();
        assert!((id.min_jacobian - 1.0).abs() < 1e-15);
        assert!(id.critical_points.is_empty());
        let f = reg.build("ft:t=0.5").unwrap();
        let scan = local_univalence_scan(&*f, &Region::centered_disk(0.45).unwrap(), 100).unwrap();
        let target = c(0.0, SQRT_2 - 1.0);
        assert!(scan.critical_points.iter().any(|z| (z - target).norm() < 1e-6), "{scan:?}");
    }

    #[test]
    fn convexity_checks() {
        let sq = Polyline::new(vec![c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)], true);
        assert!(direction_convexity_check(&sq, Direction::Horizontal).unwrap().passed);
        assert!(direction_convexity_check(&sq, Direction::Vertical).unwrap().passed);
        // a "C" shape is not convex in the vertical direction
        let cee = Polyline::new(
            vec![c(0.0, 0.0), c(3.0, 0.0), c(3.0, 1.0), c(1.0, 1.0), c(1.0, 2.0), c(3.0, 2.0), c(3.0, 3.0), c(0.0, 3.0)],
            true,
        );
        assert!(direction_convexity_check(&cee, Direction::Horizontal).unwrap().passed);
        let v = direction_convexity_check(&cee, Direction::Vertical).unwrap();
        assert!(!v.passed && v.max_crossings == 4);
        let eight = Polyline::new(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(-1.0, 1.0), c(-1.0, -1.0)], true);
        assert!(direction_convexity_check(&eight, Direction::Vertical).is_err());
    }

    #[test]
    fn starlikeness_radius() {
        let reg = MapRegistry::default();
        let koebe = reg.build("koebe").unwrap();
        assert!(starlike_boundary_check(&*koebe, SQRT_2 - 1.0).unwrap().passed);
        assert!(starlike_boundary_check(&*koebe, 0.99).unwrap().passed);
        let half = reg.build("ft:t=0.5").unwrap();
        assert!(!starlike_boundary_check(&*half, 0.6).unwrap().passed);
        let edge = starlike_boundary_check(&*half, SQRT_2 - 1.0).unwrap();
        assert!(edge.passed && !edge.near_zero.is_empty());
    }

    #[test]
    fn monotone_on_real_axis() {
        let reg = MapRegistry::default();
        assert!(real_monotonicity_check(&*reg.build("ft:t=0.3").unwrap(), 99, 0.99).unwrap().passed);
        assert!(!real_monotonicity_check(&*reg.build("square").unwrap(), 99, 0.99).unwrap().passed);
    }
}
