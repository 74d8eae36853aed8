use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::psi_inv;
use crate::measures::{CircleMeasure, SegmentMeasure};
use crate::optim::bisect;
use crate::region::Region;
use crate::series::DEFAULT_ORDER;
use crate::shear::{shear, HarmonicMap};

use super::witness::{WitnessKind, WitnessReport};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Closed form of the sheared `f_{1/2}` in the variable `w = ψ(z)`, principal
/// square roots.
#[derive(Debug, Clone, Copy, Default)]
pub struct Theorem5Closed;

impl Theorem5Closed {
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        let plus = ONE + w;
        let minus = ONE - w;
        if plus.norm() == 0.0 || minus.norm() == 0.0 || (ONE - w * w).norm() == 0.0 {
            return Err(Error::Pole(w));
        }
        let ratio = plus / minus;
        // (ratio·√ratio - 3/√ratio + 2)/12, exact zero at w = 0
        let re = (ratio * ratio.sqrt() - (ONE / ratio).sqrt() * 3.0 + 2.0) / 12.0;
        let im = (w / (ONE - w * w)).im / 2.0;
        Ok(Complex64::new(re.re, im))
    }
}

/// The shear of `f_{1/2} = ½(q_{-1} + q_1)` with `p(z) = (1+z)/(1-z)`, and the
/// closed form of the same map in the slit-plane variable.
pub fn theorem5_map() -> Result<(HarmonicMap, Theorem5Closed)> {
    let mu = CircleMeasure::dirac(0.0)?;
    let nu = SegmentMeasure::new(&[(-1.0, 0.5), (1.0, 0.5)])?;
    Ok((shear(&mu, &nu, DEFAULT_ORDER)?, Theorem5Closed))
}

/// `Re g(r i e^{-iα}) - Re g(r i e^{iα})`.
pub fn theorem5_m(r: f64, alpha: f64) -> Result<f64> {
    let g = Theorem5Closed;
    let i = Complex64::new(0.0, 1.0);
    Ok(g.eval(i * Complex64::from_polar(r, -alpha))?.re - g.eval(i * Complex64::from_polar(r, alpha))?.re)
}

/// Collision pair of the sheared `f_{1/2}` inside the lens: the root `r_α`
/// of `m(·, α)` on `(0, 1)` gives `z₁ = ψ⁻¹(r_α i e^{-iα})` and
/// `z₂ = ψ⁻¹(r_α i e^{iα})`, re-verified through quadrature evaluation.
pub fn theorem5_collision(alpha: f64) -> Result<WitnessReport> {
    if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_4) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, pi/4), got {alpha}")));
    }
    let m = |r: f64| theorem5_m(r, alpha).unwrap_or(f64::NAN);
    let (lo, hi) = (1e-6, 1.0);
    if !(m(lo) > 0.0 && m(hi) < 0.0) {
        return Err(Error::Falsification(format!(
            "m(r, {alpha}) has no sign change on (0, 1): m({lo}) = {}, m(1) = {}",
            m(lo),
            m(hi)
        )));
    }
    let r = bisect(m, lo, hi, 1e-16, 200)?;
    let m_res = m(r).abs();
    if m_res >= 1e-11 {
        return Err(Error::Falsification(format!("bisection residual {m_res} at r = {r}")));
    }
    let i = Complex64::new(0.0, 1.0);
    let z1 = psi_inv(i * Complex64::from_polar(r, -alpha))?;
    let z2 = psi_inv(i * Complex64::from_polar(r, alpha))?;
    let (map, _) = theorem5_map()?;
    let lens = Region::lens();
    if !(lens.contains(z1) && lens.contains(z2)) {
        return Err(Error::Falsification(format!("collision points {z1}, {z2} are not inside the lens")));
    }
    let df = (map.eval(z1)? - map.eval(z2)?).norm();
    if df >= 1e-8 || (z1 - z2).norm() <= 1e-2 {
        return Err(Error::Falsification(format!("unverified collision: |df| = {df}, |dz| = {}", (z1 - z2).norm())));
    }
    Ok(WitnessReport::new(WitnessKind::Collision)
        .param("alpha", alpha)
        .param("r_alpha", r)
        .point(z1)
        .point(z2)
        .residual(m_res)
        .residual(df))
}

/// The witness pair of a collision report.
pub fn report_pair(report: &WitnessReport) -> Option<(Complex64, Complex64)> {
    match report.points.as_slice() {
        [a, b, ..] => Some((Complex64::new(a[0], a[1]), Complex64::new(b[0], b[1]))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::psi;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_vanishes_at_origin() {
        assert_eq!(Theorem5Closed.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let w = c(0.3, -0.4);
        assert_eq!(Theorem5Closed.eval(w).unwrap().im, (w / (ONE - w * w)).im / 2.0);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let (map, g) = theorem5_map().unwrap();
        for z in [c(0.0, 0.3), c(0.5, 0.1), c(-0.7, -0.2), c(0.9, 0.02)] {
            let direct = map.eval(z).unwrap();
            let closed = g.eval(psi(z).unwrap()).unwrap();
            assert!((direct - closed).norm() < 1e-8, "{z}: {direct} vs {closed}");
        }
    }

    #[test]
    fn collisions_at_two_angles() {
        for alpha in [PI / 8.0, PI / 6.0] {
            let rep = theorem5_collision(alpha).unwrap();
            assert!(rep.residuals[0] < 1e-11 && rep.residuals[1] < 1e-8);
            let (z1, z2) = report_pair(&rep).unwrap();
            assert!((z1 - z2).norm() > 1e-2);
            assert!((z2 + z1.conj()).norm() < 1e-15);
        }
        assert!(theorem5_collision(1.0).is_err());
    }
}
