use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtremeGrid {
    /// Points `η = e^{2πij/etas}` on the circle.
    pub etas: usize,
    /// Points `t = -1 + 2i/(ts - 1)` on the segment, endpoints included.
    pub ts: usize,
}

impl Default for ExtremeGrid {
    fn default() -> Self {
        Self { etas: 256, ts: 256 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientExtremes {
    pub n: usize,
    pub max_a: f64,
    pub max_b: f64,
    /// `(θ, t)` attaining `max_a`, `η = e^{iθ}`.
    pub a_at: (f64, f64),
    pub b_at: (f64, f64),
    pub grid: ExtremeGrid,
}

/// `U_0(t), …, U_{n-1}(t)`.
fn chebyshev_u(t: f64, n: usize) -> Vec<f64> {
    let mut u = vec![0.0; n.max(2)];
    u[0] = 1.0;
    u[1] = 2.0 * t;
    for k in 2..n {
        u[k] = 2.0 * t * u[k - 1] - u[k - 2];
    }
    u.truncate(n);
    u
}

/// `(a_n, b_n)` of the sheared extreme point `k(·, p_η, q_t)`:
/// `n a_n = n U_{n-1}(t) + S`, `n b_n = S`, `S = Σ_{m=1}^{n-1} η^m (n-m) U_{n-1-m}(t)`.
pub fn extreme_point_coefficients(n: usize, eta: Complex64, t: f64) -> (Complex64, Complex64) {
    let u = chebyshev_u(t, n);
    let mut s = Complex64::new(0.0, 0.0);
    let mut eta_m = Complex64::new(1.0, 0.0);
    for m in 1..n {
        eta_m *= eta;
        s += eta_m * ((n - m) as f64 * u[n - 1 - m]);
    }
    let nf = n as f64;
    ((s + nf * u[n - 1]) / nf, s / nf)
}

/// Largest `|a_n|`, `|b_n|` over the extreme points on the grid.
pub fn coefficient_extremes(n: usize, grid: ExtremeGrid) -> Result<CoefficientExtremes> {
    if n < 2 || grid.etas == 0 || grid.ts < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2 and a nonempty grid, got n = {n}")));
    }
    let best = (0..grid.etas)
        .into_par_iter()
        .map(|j| {
            let theta = TAU * j as f64 / grid.etas as f64;
            let eta = Complex64::from_polar(1.0, theta);
            let mut a = (f64::NEG_INFINITY, (0.0, 0.0));
            let mut b = (f64::NEG_INFINITY, (0.0, 0.0));
            for i in 0..grid.ts {
                let t = -1.0 + 2.0 * i as f64 / (grid.ts - 1) as f64;
                let (an, bn) = extreme_point_coefficients(n, eta, t);
                if an.norm() > a.0 {
                    a = (an.norm(), (theta, t));
                }
                if bn.norm() > b.0 {
                    b = (bn.norm(), (theta, t));
                }
            }
            (a, b)
        })
        .collect::<Vec<_>>();
    let mut a = (f64::NEG_INFINITY, (0.0, 0.0));
    let mut b = (f64::NEG_INFINITY, (0.0, 0.0));
    for (ca, cb) in best {
        if ca.0 > a.0 {
            a = ca;
        }
        if cb.0 > b.0 {
            b = cb;
        }
    }
    Ok(CoefficientExtremes { n, max_a: a.0, max_b: b.0, a_at: a.1, b_at: b.1, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{CircleMeasure, SegmentMeasure};
    use crate::shear::shear;
    use proptest::prelude::*;

    #[test]
    fn second_coefficients_at_koebe_corner() {
        let e = coefficient_extremes(2, ExtremeGrid::default()).unwrap();
        assert!((e.max_a - 2.5).abs() < 1e-14);
        assert!((e.max_b - 0.5).abs() < 1e-14);
        assert_eq!(e.a_at, (0.0, 1.0));
        let fine = coefficient_extremes(2, ExtremeGrid { etas: 512, ts: 512 }).unwrap();
        assert!((fine.max_a - e.max_a).abs() < 1e-6 && (fine.max_b - e.max_b).abs() < 1e-6);
    }

    #[test]
    fn sharp_bounds_for_small_n() {
        for n in 2..8 {
            let e = coefficient_extremes(n, ExtremeGrid { etas: 64, ts: 65 }).unwrap();
            let nf = n as f64;
            assert!((e.max_a - (nf + 1.0) * (2.0 * nf + 1.0) / 6.0).abs() < 1e-10);
            assert!((e.max_b - (nf - 1.0) * (2.0 * nf - 1.0) / 6.0).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn closed_form_matches_shear_series(theta in 0.0f64..TAU, t in -1.0f64..1.0, n in 2usize..12) {
            let map = shear(&CircleMeasure::dirac(theta).unwrap(), &SegmentMeasure::dirac(t).unwrap(), 16).unwrap();
            let (a, b) = extreme_point_coefficients(n, Complex64::from_polar(1.0, theta), t);
            prop_assert!((map.h_series().coeff(n) - a).norm() < 1e-10);
            prop_assert!((map.g_series().coeff(n) - b).norm() < 1e-10);
        }
    }
}
