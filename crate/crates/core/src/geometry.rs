//! Planar polyline geometry: segment intersection, self-intersection
//! detection and winding numbers.

use num_complex::Complex64;

use crate::region::Polyline;

/// Relative tolerance for touching segments and points on a curve.
pub const TOUCH_TOLERANCE: f64 = 1e-12;

/// Segment count below which the exact pairwise test is used.
pub const PAIRWISE_CUTOFF: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitKind {
    /// The segments cross transversally.
    Proper,
    /// An endpoint lies on the other segment, or the segments overlap.
    Touch,
}

/// An intersection of segments `i` and `j` (`i < j`) at parameters
/// `s` along `i` and `u` along `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentHit {
    pub i: usize,
    pub j: usize,
    pub s: f64,
    pub u: f64,
    pub point: Complex64,
    pub kind: HitKind,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    cross(b - a, c - a)
}

/// Distance from `p` to segment `[a, b]` and the parameter of the foot point.
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> (f64, f64) {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return ((p - a).norm(), 0.0);
    }
    let s = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    ((a + d * s - p).norm(), s)
}

/// Intersection of `[p1, p2]` and `[q1, q2]`; touching within `tol` counts.
pub fn segment_intersection(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64, tol: f64) -> Option<(f64, f64, HitKind)> {
    if p1.re.min(p2.re) > q1.re.max(q2.re) + tol
        || q1.re.min(q2.re) > p1.re.max(p2.re) + tol
        || p1.im.min(p2.im) > q1.im.max(q2.im) + tol
        || q1.im.min(q2.im) > p1.im.max(p2.im) + tol
    {
        return None;
    }
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        let s = d1 / (d1 - d2);
        let u = d3 / (d3 - d4);
        let near_end = [
            point_segment_distance(p1, q1, q2).0,
            point_segment_distance(p2, q1, q2).0,
            point_segment_distance(q1, p1, p2).0,
            point_segment_distance(q2, p1, p2).0,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let kind = if near_end <= tol { HitKind::Touch } else { HitKind::Proper };
        return Some((s, u, kind));
    }
    let candidates = [
        (point_segment_distance(p1, q1, q2), 0.0, true),
        (point_segment_distance(p2, q1, q2), 1.0, true),
        (point_segment_distance(q1, p1, p2), 0.0, false),
        (point_segment_distance(q2, p1, p2), 1.0, false),
    ];
    candidates
        .into_iter()
        .filter(|((dist, _), _, _)| *dist <= tol)
        .map(|((_, foot), end, on_p)| if on_p { (end, foot, HitKind::Touch) } else { (foot, end, HitKind::Touch) })
        .next()
}

fn adjacent(i: usize, j: usize, segments: usize, closed: bool) -> bool {
    j == i + 1 || (closed && i == 0 && j + 1 == segments)
}

fn local_tolerance(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let m = a.norm().max(b.norm()).max(c.norm()).max(d.norm()).max(1.0);
    TOUCH_TOLERANCE * m
}

fn test_pair(poly: &Polyline, i: usize, j: usize) -> Option<SegmentHit> {
    let (a, b) = poly.segment(i);
    let (c, d) = poly.segment(j);
    let tol = local_tolerance(a, b, c, d);
    segment_intersection(a, b, c, d, tol).map(|(s, u, kind)| SegmentHit { i, j, s, u, point: a + (b - a) * s, kind })
}

/// All intersections between non-adjacent segments, by exhaustive pairing.
pub fn self_intersections_pairwise(poly: &Polyline, limit: usize) -> Vec<SegmentHit> {
    let m = poly.segment_count();
    let closed = poly.is_closed();
    let mut hits = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if adjacent(i, j, m, closed) {
                continue;
            }
            if let Some(h) = test_pair(poly, i, j) {
                hits.push(h);
                if hits.len() >= limit {
                    return hits;
                }
            }
        }
    }
    hits
}

/// All intersections between non-adjacent segments, by a sweep over
/// bounding boxes sorted on their left edge.
pub fn self_intersections_sweep(poly: &Polyline, limit: usize) -> Vec<SegmentHit> {
    let m = poly.segment_count();
    let closed = poly.is_closed();
    let boxes: Vec<(f64, f64, f64, f64)> = (0..m)
        .map(|k| {
            let (a, b) = poly.segment(k);
            let pad = local_tolerance(a, b, a, b);
            (a.re.min(b.re) - pad, a.re.max(b.re) + pad, a.im.min(b.im) - pad, a.im.max(b.im) + pad)
        })
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| boxes[x].0.total_cmp(&boxes[y].0).then(x.cmp(&y)));
    let mut hits = Vec::new();
    for (pos, &k) in order.iter().enumerate() {
        let (_, xmax, ymin, ymax) = boxes[k];
        for &l in &order[pos + 1..] {
            let (lxmin, _, lymin, lymax) = boxes[l];
            if lxmin > xmax {
                break;
            }
            if lymin > ymax || lymax < ymin {
                continue;
            }
            let (i, j) = if k < l { (k, l) } else { (l, k) };
            if adjacent(i, j, m, closed) {
                continue;
            }
            if let Some(h) = test_pair(poly, i, j) {
                hits.push(h);
            }
        }
    }
    hits.sort_by_key(|h| (h.i, h.j));
    hits.truncate(limit);
    hits
}

/// Self-intersections of `poly`, pairwise for small inputs and by sweep otherwise.
pub fn self_intersections(poly: &Polyline, limit: usize) -> Vec<SegmentHit> {
    if poly.segment_count() < PAIRWISE_CUTOFF {
        self_intersections_pairwise(poly, limit)
    } else {
        self_intersections_sweep(poly, limit)
    }
}

pub fn is_simple(poly: &Polyline) -> bool {
    self_intersections(poly, 1).is_empty()
}

/// Winding number of a closed polyline about `p`, or `None` when `p` lies
/// on the curve within tolerance.
pub fn winding_number(poly: &Polyline, p: Complex64) -> Option<i64> {
    let pts = poly.points();
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let mut w = 0i64;
    for k in 0..n {
        let a = pts[k];
        let b = pts[(k + 1) % n];
        let tol = local_tolerance(a, b, p, p);
        if point_segment_distance(p, a, b).0 <= tol {
            return None;
        }
        if a.im <= p.im {
            if b.im > p.im && orient(a, b, p) > 0.0 {
                w += 1;
            }
        } else if b.im <= p.im && orient(a, b, p) < 0.0 {
            w -= 1;
        }
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> Polyline {
        Polyline::new(vec![c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)], true)
    }

    #[test]
    fn crossing_and_touching_segments() {
        let (s, u, kind) = segment_intersection(c(0.0, 0.0), c(2.0, 2.0), c(0.0, 2.0), c(2.0, 0.0), 1e-12).unwrap();
        assert_eq!(kind, HitKind::Proper);
        assert!((s - 0.5).abs() < 1e-15 && (u - 0.5).abs() < 1e-15);
        let t = segment_intersection(c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), 1e-12).unwrap();
        assert_eq!(t.2, HitKind::Touch);
        assert!(segment_intersection(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), 1e-12).is_none());
        assert!(segment_intersection(c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), 1e-12).is_none());
    }

    #[test]
    fn square_is_simple_and_winds_once() {
        let sq = square();
        assert!(is_simple(&sq));
        assert_eq!(winding_number(&sq, c(0.0, 0.0)), Some(1));
        assert_eq!(winding_number(&sq, c(3.0, 0.0)), Some(0));
        assert_eq!(winding_number(&sq, c(1.0, 0.0)), None);
        let cw = Polyline::new(sq.points().iter().rev().copied().collect(), true);
        assert_eq!(winding_number(&cw, c(0.2, 0.1)), Some(-1));
    }

    #[test]
    fn figure_eight_self_intersects() {
        let eight = Polyline::new(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(-1.0, 1.0), c(-1.0, -1.0)], true);
        let hits = self_intersections(&eight, 10);
        assert!(!hits.is_empty());
        assert!(hits.iter().all(|h| h.point.norm() < 1e-12));
    }

    #[test]
    fn doubly_traversed_circle_winds_twice() {
        let pts: Vec<_> = (0..400).map(|k| Complex64::from_polar(1.0, 4.0 * std::f64::consts::PI * k as f64 / 400.0 + 0.001)).collect();
        let poly = Polyline::new(pts, true);
        assert_eq!(winding_number(&poly, c(0.1, 0.0)), Some(2));
    }

    proptest! {
        #[test]
        fn sweep_agrees_with_pairwise(seed_pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..40)) {
            let poly = Polyline::new(seed_pts.iter().map(|&(x, y)| c(x, y)).collect(), true);
            let a: Vec<(usize, usize)> = self_intersections_pairwise(&poly, usize::MAX).iter().map(|h| (h.i, h.j)).collect();
            let b: Vec<(usize, usize)> = self_intersections_sweep(&poly, usize::MAX).iter().map(|h| (h.i, h.j)).collect();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn star_shaped_polygon_is_simple(radii in prop::collection::vec(0.5f64..1.5, 8..64)) {
            let n = radii.len();
            let pts: Vec<_> = radii.iter().enumerate()
                .map(|(k, &r)| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
                .collect();
            let poly = Polyline::new(pts, true);
            prop_assert!(is_simple(&poly));
            prop_assert_eq!(winding_number(&poly, c(0.0, 0.0)), Some(1));
        }
    }
}
