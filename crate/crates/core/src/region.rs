//! Planar regions in the unit disk and their boundary parametrizations.
//!
//! Lens arcs are parametrized through `ψ`: the lens boundary point with
//! parameter `α` is `ψ⁻¹(e^{iα})`, so equal steps in `α` are equal steps on
//! the unit circle of the slit-plane picture. The corners `±1` (and, for the
//! half-lens, `±i(√2-1)`) are cut out at distance `exclusion_radius`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{psi, psi_inv};

/// `√2 - 1`, the height of the lens and the starlikeness radius of the class.
pub const LENS_HEIGHT: f64 = SQRT_2 - 1.0;

pub const DEFAULT_EXCLUSION: f64 = 1e-4;

/// Points per corner bypass arc in certification contours.
const BYPASS_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegionKind {
    Disk { center: Complex64, radius: f64 },
    /// `D(-i; √2) ∩ D(i; √2)`
    Lens,
    /// `Lens ∩ {Re z > 0}`
    HalfLens,
    /// `{z ∈ 𝔻 : |2z/(1+z²)| < c}`
    PsiSublevel { c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub kind: RegionKind,
    pub exclusion_radius: f64,
}

/// Ordered points; consecutive points are distinct, and for a closed
/// polyline the closing segment back to the first point is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Complex64>,
    closed: bool,
}

impl Polyline {
    /// Drops consecutive repeats (and a repeated first point when closed).
    pub fn new(mut points: Vec<Complex64>, closed: bool) -> Self {
        points.dedup();
        if closed {
            while points.len() > 1 && points.first() == points.last() {
                points.pop();
            }
        }
        Self { points, closed }
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        match (self.closed, self.points.len()) {
            (_, 0 | 1) => 0,
            (true, n) => n,
            (false, n) => n - 1,
        }
    }

    /// Endpoints of segment `i`.
    pub fn segment(&self, i: usize) -> (Complex64, Complex64) {
        let n = self.points.len();
        (self.points[i], self.points[(i + 1) % n])
    }

    /// Largest modulus of any vertex.
    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }
}

/// Contour used for certification: boundary samples plus corner bypass arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<Complex64>,
    /// Excluded corners, each with the radius of its cut-out.
    pub excluded: Vec<(Complex64, f64)>,
}

enum Piece {
    /// Lens-boundary parameters `α` in `[from, to]`, sampled at midpoints.
    LensArc { from: f64, to: f64, share: f64 },
    /// Straight segment, sampled at midpoints.
    Segment { from: Complex64, to: Complex64, share: f64 },
    /// Bypass around an excluded corner, endpoints included, clockwise.
    Bypass { corner: Complex64, radius: f64, from: f64, to: f64 },
}

fn lens_point(alpha: f64) -> Complex64 {
    let zeta = Complex64::from_polar(1.0, alpha);
    match psi_inv(zeta) {
        Ok(z) => z,
        // exact corners, only reached with zero exclusion
        Err(_) => Complex64::new(zeta.re.signum(), 0.0),
    }
}

/// Upper-arc point at chord distance `eps` from the corner `1`, moving towards
/// `angle_target` along the circle `|z + i| = √2`; returns its `α`.
fn arc_alpha_at_distance(start_phi: f64, direction: f64, eps: f64) -> f64 {
    let delta = 2.0 * (eps / (2.0 * SQRT_2)).min(1.0).asin();
    let z = Complex64::new(0.0, -1.0) + Complex64::from_polar(SQRT_2, start_phi + direction * delta);
    psi(z).expect("lens arc point is away from ±i").arg()
}

impl Region {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !center.is_finite() {
            return Err(Error::InvalidInput(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Self { kind: RegionKind::Disk { center, radius }, exclusion_radius: DEFAULT_EXCLUSION })
    }

    pub fn centered_disk(radius: f64) -> Result<Self> {
        Self::disk(Complex64::new(0.0, 0.0), radius)
    }

    pub fn lens() -> Self {
        Self { kind: RegionKind::Lens, exclusion_radius: DEFAULT_EXCLUSION }
    }

    pub fn half_lens() -> Self {
        Self { kind: RegionKind::HalfLens, exclusion_radius: DEFAULT_EXCLUSION }
    }

    pub fn psi_sublevel(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidInput(format!("sublevel bound must be positive, got {c}")));
        }
        Ok(Self { kind: RegionKind::PsiSublevel { c }, exclusion_radius: DEFAULT_EXCLUSION })
    }

    pub fn with_exclusion(mut self, eps: f64) -> Self {
        self.exclusion_radius = eps.max(0.0);
        self
    }

    /// Raises the corner exclusion until every contour point satisfies
    /// `|z| <= max_modulus`. Only the lens corners `±1` touch the unit circle.
    pub fn within_modulus(self, max_modulus: f64) -> Self {
        match self.kind {
            RegionKind::Lens | RegionKind::HalfLens if max_modulus < 1.0 => {
                // |1 - ε e^{±iπ/4}|² = 1 - √2 ε + ε² must not exceed m²
                let slack = 1.0 - max_modulus * max_modulus;
                let eps = (SQRT_2 - (2.0 - 4.0 * slack).max(0.0).sqrt()) / 2.0 * (1.0 + 1e-6);
                let exclusion = self.exclusion_radius.max(eps);
                self.with_exclusion(exclusion)
            }
            _ => self,
        }
    }

    /// Open-region membership.
    pub fn contains(&self, z: Complex64) -> bool {
        if !z.is_finite() {
            return false;
        }
        let i = Complex64::new(0.0, 1.0);
        let in_lens = || (z - i).norm() < SQRT_2 && (z + i).norm() < SQRT_2;
        match self.kind {
            RegionKind::Disk { center, radius } => (z - center).norm() < radius,
            RegionKind::Lens => in_lens(),
            RegionKind::HalfLens => z.re > 0.0 && in_lens(),
            RegionKind::PsiSublevel { c } => z.norm() < 1.0 && psi(z).map(|w| w.norm() < c).unwrap_or(false),
        }
    }

    /// A point from which the region is star-shaped.
    pub fn center(&self) -> Complex64 {
        match self.kind {
            RegionKind::Disk { center, .. } => center,
            RegionKind::HalfLens => Complex64::new(0.4, 0.0),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    fn lens_alpha_cut(&self) -> f64 {
        if self.exclusion_radius > 0.0 {
            arc_alpha_at_distance(FRAC_PI_4, 1.0, self.exclusion_radius * (1.0 + 1e-9))
        } else {
            0.0
        }
    }

    fn pieces(&self) -> Vec<Piece> {
        let eps = self.exclusion_radius;
        let one = Complex64::new(1.0, 0.0);
        let top = Complex64::new(0.0, LENS_HEIGHT);
        match self.kind {
            RegionKind::Lens => {
                let a = self.lens_alpha_cut();
                let mut v = vec![Piece::LensArc { from: a, to: PI - a, share: 0.5 }];
                if eps > 0.0 {
                    let up = lens_point(PI - a) + one;
                    let down = lens_point(PI + a) + one;
                    v.push(Piece::Bypass { corner: -one, radius: eps, from: up.arg(), to: down.arg() });
                }
                v.push(Piece::LensArc { from: PI + a, to: TAU - a, share: 0.5 });
                if eps > 0.0 {
                    let down = lens_point(TAU - a) - one;
                    let up = lens_point(a) - one;
                    v.push(Piece::Bypass { corner: one, radius: eps, from: down.arg().rem_euclid(TAU), to: up.arg() });
                }
                v
            }
            RegionKind::HalfLens => {
                let a = self.lens_alpha_cut();
                let b = if eps > 0.0 {
                    FRAC_PI_2 - arc_alpha_at_distance(FRAC_PI_2, -1.0, eps * (1.0 + 1e-9))
                } else {
                    0.0
                };
                let mut v = vec![Piece::LensArc { from: a, to: FRAC_PI_2 - b, share: 1.0 / 3.0 }];
                if eps > 0.0 {
                    let from = (lens_point(FRAC_PI_2 - b) - top).arg();
                    v.push(Piece::Bypass { corner: top, radius: eps, from, to: -FRAC_PI_2 });
                }
                let shrink = Complex64::new(0.0, eps.min(LENS_HEIGHT * 0.5));
                v.push(Piece::Segment { from: top - shrink, to: -top + shrink, share: 1.0 / 3.0 });
                if eps > 0.0 {
                    let to = (lens_point(1.5 * PI + b) + top).arg();
                    v.push(Piece::Bypass { corner: -top, radius: eps, from: FRAC_PI_2, to });
                }
                v.push(Piece::LensArc { from: 1.5 * PI + b, to: TAU - a, share: 1.0 / 3.0 });
                if eps > 0.0 {
                    let down = lens_point(TAU - a) - one;
                    let up = lens_point(a) - one;
                    v.push(Piece::Bypass { corner: one, radius: eps, from: down.arg().rem_euclid(TAU), to: up.arg() });
                }
                v
            }
            _ => Vec::new(),
        }
    }

    /// `n` points on the boundary in positive orientation, corner
    /// neighbourhoods omitted for the lens kinds. Closure is implicit.
    pub fn boundary(&self, n: usize) -> Polyline {
        Polyline::new(self.sample(n, false).points, true)
    }

    /// Boundary samples with the excluded corners bypassed by small circular
    /// arcs through the region, giving a Jordan contour inside the closure.
    pub fn contour(&self, n: usize) -> Contour {
        self.sample(n, true)
    }

    fn sample(&self, n: usize, with_bypass: bool) -> Contour {
        let mut points = Vec::with_capacity(n + 4 * BYPASS_POINTS);
        let mut excluded = Vec::new();
        match self.kind {
            RegionKind::Disk { center, radius } => {
                points.extend((0..n).map(|j| center + Complex64::from_polar(radius, TAU * j as f64 / n as f64)));
            }
            RegionKind::PsiSublevel { c } => {
                for j in 0..n {
                    let zeta = Complex64::from_polar(c, TAU * j as f64 / n as f64);
                    if let Ok(z) = psi_inv(zeta) {
                        points.push(z);
                    }
                }
            }
            RegionKind::Lens | RegionKind::HalfLens => {
                let pieces = self.pieces();
                let mut remaining = n;
                let sampled: Vec<usize> = pieces
                    .iter()
                    .map(|p| match p {
                        Piece::LensArc { share, .. } | Piece::Segment { share, .. } => {
                            let k = ((n as f64 * share).round() as usize).min(remaining);
                            remaining -= k;
                            k
                        }
                        Piece::Bypass { .. } => 0,
                    })
                    .collect();
                // leftover from rounding goes to the first arc
                let mut counts = sampled;
                if let Some(first) = counts.first_mut() {
                    *first += remaining;
                }
                for (piece, k) in pieces.iter().zip(counts) {
                    match *piece {
                        Piece::LensArc { from, to, .. } => {
                            points.extend((0..k).map(|j| lens_point(from + (to - from) * (j as f64 + 0.5) / k as f64)));
                        }
                        Piece::Segment { from, to, .. } => {
                            points.extend((0..k).map(|j| from + (to - from) * ((j as f64 + 0.5) / k as f64)));
                        }
                        Piece::Bypass { corner, radius, from, to } => {
                            excluded.push((corner, radius));
                            if with_bypass {
                                let m = BYPASS_POINTS;
                                points.extend((0..m).map(|j| {
                                    corner + Complex64::from_polar(radius, from + (to - from) * j as f64 / (m - 1) as f64)
                                }));
                            }
                        }
                    }
                }
            }
        }
        Contour { points, excluded }
    }

    /// `count` interior points for winding-number probes, spread around the
    /// region and pulled towards its center.
    pub fn interior_probes(&self, count: usize) -> Vec<Complex64> {
        let boundary = self.boundary(256.max(4 * count));
        let c = self.center();
        let pts = boundary.points();
        let fractions = [0.3, 0.55, 0.8, 0.9];
        let mut probes = vec![c];
        for k in 0..count.saturating_sub(1) {
            let b = pts[k * pts.len() / count.max(1)];
            let z = c + (b - c) * fractions[k % fractions.len()];
            if self.contains(z) {
                probes.push(z);
            }
        }
        probes
    }

    /// Axis-aligned bounding box `(min corner, max corner)`.
    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        match self.kind {
            RegionKind::Disk { center, radius } => {
                (center - Complex64::new(radius, radius), center + Complex64::new(radius, radius))
            }
            RegionKind::Lens => (Complex64::new(-1.0, -LENS_HEIGHT), Complex64::new(1.0, LENS_HEIGHT)),
            RegionKind::HalfLens => (Complex64::new(0.0, -LENS_HEIGHT), Complex64::new(1.0, LENS_HEIGHT)),
            RegionKind::PsiSublevel { .. } => {
                let b = self.with_exclusion(0.0).boundary(512);
                let (mut lo, mut hi) = (Complex64::new(f64::MAX, f64::MAX), Complex64::new(f64::MIN, f64::MIN));
                for p in b.points() {
                    lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
                    hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
                }
                (lo * 1.01, hi * 1.01)
            }
        }
    }

    /// Points of an `n × n` lattice over the bounding box that lie in the region.
    pub fn grid(&self, n: usize) -> Vec<Complex64> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / n as f64;
                let y = lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / n as f64;
                let z = Complex64::new(x, y);
                if self.contains(z) {
                    out.push(z);
                }
            }
        }
        out
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RegionKind::Disk { center, radius } if center == Complex64::new(0.0, 0.0) => write!(f, "disk:r={radius}"),
            RegionKind::Disk { center, radius } => write!(f, "disk:r={radius},cx={},cy={}", center.re, center.im),
            RegionKind::Lens => write!(f, "lens"),
            RegionKind::HalfLens => write!(f, "halflens"),
            RegionKind::PsiSublevel { c } => write!(f, "psisub:c={c}"),
        }
    }
}

/// `name[:key=value,...]` as used on the command line.
pub(crate) fn parse_spec(spec: &str) -> Result<(String, Vec<(String, f64)>)> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, r),
        None => (spec, ""),
    };
    let mut params = Vec::new();
    for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected key=value in '{spec}', got '{part}'")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("'{v}' is not a number in '{spec}'")))?;
        params.push((k.trim().to_ascii_lowercase(), v));
    }
    Ok((name.trim().to_ascii_lowercase(), params))
}

pub(crate) fn param(params: &[(String, f64)], key: &str) -> Option<f64> {
    params.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
}

impl FromStr for Region {
    type Err = Error;

    /// `disk:r=0.2134[,cx=..,cy=..]`, `lens`, `halflens`, `psisub:c=0.4142`,
    /// each optionally with `eps=` for the corner exclusion.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = parse_spec(s)?;
        let region = match name.as_str() {
            "disk" => {
                let r = param(&params, "r").ok_or_else(|| Error::InvalidInput("disk needs r=".into()))?;
                let c = Complex64::new(param(&params, "cx").unwrap_or(0.0), param(&params, "cy").unwrap_or(0.0));
                Region::disk(c, r)?
            }
            "lens" => Region::lens(),
            "halflens" => Region::half_lens(),
            "psisub" => Region::psi_sublevel(param(&params, "c").ok_or_else(|| Error::InvalidInput("psisub needs c=".into()))?)?,
            other => return Err(Error::InvalidInput(format!("unknown region '{other}'"))),
        };
        Ok(match param(&params, "eps") {
            Some(eps) => region.with_exclusion(eps),
            None => region,
        })
    }
}

/// True iff `((1+z)/(1-z))⁴` is real and negative (relative tolerance 1e-10)
/// and `|z| < 1`, i.e. `z` lies on one of the two lens arcs inside the disk.
pub fn on_lens_boundary_arc(z: Complex64) -> Result<bool> {
    let minus = Complex64::new(1.0, 0.0) - z;
    if minus.norm() == 0.0 {
        return Err(Error::Domain("z = 1 is a corner of the lens".into()));
    }
    let q = ((Complex64::new(1.0, 0.0) + z) / minus).powi(4);
    Ok(z.norm() < 1.0 && q.re < 0.0 && q.im.abs() <= 1e-10 * q.norm())
}
