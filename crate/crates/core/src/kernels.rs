//! Closed-form evaluators for the analytic building blocks: the Herglotz and
//! Robertson sums over atomic measures, the two-slit map `ψ(z) = 2z/(1+z²)`
//! and its inverse, the slit-plane representation, the extremal family
//! `f_t`, Goodman's locally univalent example and the Picard example.
//!
//! Evaluators never return infinities: anything within [`POLE_GUARD`] of a
//! singularity is reported as [`Error::Pole`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{CircleMeasure, SegmentMeasure};
use crate::series::PowerSeries;

pub const POLE_GUARD: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn guard(denominator: Complex64, z: Complex64) -> Result<()> {
    if denominator.norm() < POLE_GUARD || !denominator.is_finite() {
        Err(Error::Pole(z))
    } else {
        Ok(())
    }
}

fn require_disk(z: Complex64) -> Result<()> {
    if z.norm() >= 1.0 || !z.is_finite() {
        Err(Error::Domain(format!("|z| = {} is not inside the unit disk", z.norm())))
    } else {
        Ok(())
    }
}

/// Herglotz kernel `(1 + ηz) / (1 - ηz)`.
pub fn p_eta(eta: Complex64, z: Complex64) -> Result<Complex64> {
    let d = ONE - eta * z;
    guard(d, z)?;
    Ok((ONE + eta * z) / d)
}

/// `p(z) = Σ w_j (1 + η_j z)/(1 - η_j z)`, a function with positive real part.
pub fn herglotz_eval(mu: &CircleMeasure, z: Complex64) -> Result<Complex64> {
    require_disk(z)?;
    mu.atoms()
        .iter()
        .try_fold(Complex64::new(0.0, 0.0), |acc, a| Ok(acc + p_eta(a.eta(), z)? * a.w))
}

/// `p'(z) = Σ w_j 2η_j / (1 - η_j z)²`.
pub fn herglotz_prime(mu: &CircleMeasure, z: Complex64) -> Result<Complex64> {
    require_disk(z)?;
    mu.atoms().iter().try_fold(Complex64::new(0.0, 0.0), |acc, a| {
        let eta = a.eta();
        let d = ONE - eta * z;
        guard(d, z)?;
        Ok(acc + eta * 2.0 * a.w / (d * d))
    })
}

fn robertson_denominator(t: f64, z: Complex64) -> Complex64 {
    ONE - z * 2.0 * t + z * z
}

/// Extreme point `q_t(z) = z / (1 - 2tz + z²)` of the typically real class.
pub fn qt(t: f64, z: Complex64) -> Result<Complex64> {
    let d = robertson_denominator(t, z);
    guard(d, z)?;
    Ok(z / d)
}

/// `q_t'(z) = (1 - z²) / (1 - 2tz + z²)²`.
pub fn qt_prime(t: f64, z: Complex64) -> Result<Complex64> {
    let d = robertson_denominator(t, z);
    guard(d, z)?;
    Ok((ONE - z * z) / (d * d))
}

/// `q_t''(z) = (-2z D - 4(1 - z²)(z - t)) / D³` with `D = 1 - 2tz + z²`.
pub fn qt_second(t: f64, z: Complex64) -> Result<Complex64> {
    let d = robertson_denominator(t, z);
    guard(d, z)?;
    Ok((-z * d * 2.0 - (ONE - z * z) * (z - t) * 4.0) / (d * d * d))
}

/// Robertson sum `F(z) = Σ w_j q_{t_j}(z)` together with `F'(z)`.
///
/// Points on the unit circle are accepted; only the pole guard applies.
pub fn robertson_eval(nu: &SegmentMeasure, z: Complex64) -> Result<(Complex64, Complex64)> {
    if !z.is_finite() || z.norm() > 1.0 {
        return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
    }
    let mut f = Complex64::new(0.0, 0.0);
    let mut fp = Complex64::new(0.0, 0.0);
    for a in nu.atoms() {
        let d = robertson_denominator(a.t, z);
        guard(d, z)?;
        f += z / d * a.w;
        fp += (ONE - z * z) / (d * d) * a.w;
    }
    Ok((f, fp))
}

/// `F''(z)` for the Robertson sum.
pub fn robertson_second(nu: &SegmentMeasure, z: Complex64) -> Result<Complex64> {
    nu.atoms()
        .iter()
        .try_fold(Complex64::new(0.0, 0.0), |acc, a| Ok(acc + qt_second(a.t, z)? * a.w))
}

/// Taylor coefficients of the Herglotz function: `c_0 = 1`, `c_n = 2 Σ w_j η_j^n`.
pub fn circle_series(mu: &CircleMeasure, order: usize) -> PowerSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = ONE;
    for a in mu.atoms() {
        let eta = a.eta();
        let mut power = ONE;
        for c in coeffs.iter_mut().skip(1) {
            power *= eta;
            *c += power * (2.0 * a.w);
        }
    }
    PowerSeries::new(coeffs)
}

/// Taylor coefficients of the Robertson sum: `a_0 = 0`, `a_n = Σ w_j U_{n-1}(t_j)`
/// with the Chebyshev recurrence `U_{k+1} = 2t U_k - U_{k-1}`.
pub fn segment_series(nu: &SegmentMeasure, order: usize) -> PowerSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    for a in nu.atoms() {
        let (mut u_prev, mut u) = (0.0_f64, 1.0_f64); // U_{-1}, U_0
        for c in coeffs.iter_mut().skip(1) {
            c.re += a.w * u;
            let next = 2.0 * a.t * u - u_prev;
            u_prev = u;
            u = next;
        }
    }
    PowerSeries::new(coeffs)
}

/// `ψ(z) = 2z / (1 + z²)`: maps the disk onto the plane slit along
/// `(-∞, -1] ∪ [1, ∞)` and the lens domain onto the unit disk.
pub fn psi(z: Complex64) -> Result<Complex64> {
    let d = ONE + z * z;
    guard(d, z)?;
    Ok(z * 2.0 / d)
}

/// `ψ'(z) = 2(1 - z²)/(1 + z²)²`.
pub fn psi_prime(z: Complex64) -> Result<Complex64> {
    let d = ONE + z * z;
    guard(d, z)?;
    Ok((ONE - z * z) * 2.0 / (d * d))
}

/// True when ζ sits on one of the excluded rays `(-∞, -1]`, `[1, ∞)`.
pub fn on_slit(zeta: Complex64) -> bool {
    zeta.im == 0.0 && zeta.re.abs() >= 1.0
}

/// Inverse of ψ on the slit plane, principal square root, `ψ⁻¹(0) = 0`.
///
/// Uses the cancellation-free form `ζ / (1 + √(1 - ζ²))`, equal to
/// `(1 - √(1 - ζ²)) / ζ`.
pub fn psi_inv(zeta: Complex64) -> Result<Complex64> {
    if !zeta.is_finite() || on_slit(zeta) {
        return Err(Error::Branch(zeta));
    }
    let root = (ONE - zeta * zeta).sqrt();
    Ok(zeta / (ONE + root))
}

/// Slit-plane representation `F(ζ) = Σ w_j ζ / (1 - t_j ζ)` and `F'(ζ)`;
/// `½ F∘ψ` is the Robertson sum of the same measure.
pub fn slit_rep_eval(nu: &SegmentMeasure, zeta: Complex64) -> Result<(Complex64, Complex64)> {
    if !zeta.is_finite() || on_slit(zeta) {
        return Err(Error::Branch(zeta));
    }
    let mut f = Complex64::new(0.0, 0.0);
    let mut fp = Complex64::new(0.0, 0.0);
    for a in nu.atoms() {
        let d = ONE - zeta * a.t;
        guard(d, zeta)?;
        f += zeta / d * a.w;
        fp += ONE / (d * d) * a.w;
    }
    Ok((f, fp))
}

/// `f_t(z) = t z/(1-z)² + (1-t) z/(1+z)²` and its derivative through the
/// factorization `f_t' = (Q + (1-t)/t) · t(1-z)/(1+z)³`, `Q = ((1+z)/(1-z))⁴`.
pub fn ft_eval(t: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("f_t needs t in [0, 1], got {t}")));
    }
    let minus = ONE - z;
    let plus = ONE + z;
    guard(minus, z)?;
    guard(plus, z)?;
    let value = z * t / (minus * minus) + z * (1.0 - t) / (plus * plus);
    let derivative = if t == 0.0 {
        minus / (plus * plus * plus)
    } else {
        let q = (plus / minus).powi(4);
        (q + (1.0 - t) / t) * (minus * t / (plus * plus * plus))
    };
    Ok((value, derivative))
}

/// `f_{t,R}(z) = f_t(Rz)/R` and its derivative `f_t'(Rz)`.
pub fn ft_r_eval(t: f64, r: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("f_(t,R) needs R in (0, 1], got {r}")));
    }
    let (v, d) = ft_eval(t, z * r)?;
    Ok((v / r, d))
}

/// Argument of the tangent in Goodman's function.
fn goodman_arg(z: Complex64) -> Result<Complex64> {
    let d = ONE + z * z;
    guard(d, z)?;
    Ok(z * PI / d)
}

/// `G(z) = tan(πz/(1+z²)) / π` and `G'(z) = (1 - z²) / ((1+z²)² cos²(πz/(1+z²)))`.
pub fn goodman_g(z: Complex64) -> Result<(Complex64, Complex64)> {
    let u = goodman_arg(z)?;
    let cos = u.cos();
    if cos.norm() < 1e-10 {
        return Err(Error::Pole(z));
    }
    let d = ONE + z * z;
    let value = u.sin() / cos / PI;
    let derivative = (ONE - z * z) / (d * d * cos * cos);
    Ok((value, derivative))
}

/// Membership in `S = {|Re(πz/(1+z²))| < π/2}`, where G is univalent.
pub fn goodman_in_s(z: Complex64) -> bool {
    goodman_arg(z).map(|u| u.re.abs() < PI / 2.0).unwrap_or(false)
}

/// `(f∘u)(z)` with `u(z) = 4z/(1+z)²`, `f(ξ) = ξ e^{-ξ}`, and its derivative
/// `(1 - u) e^{-u} · 4(1-z)/(1+z)³`.
pub fn picard_map(z: Complex64) -> Result<(Complex64, Complex64)> {
    let plus = ONE + z;
    guard(plus, z)?;
    let u = z * 4.0 / (plus * plus);
    let e = (-u).exp();
    let du = (ONE - z) * 4.0 / (plus * plus * plus);
    Ok((u * e, (ONE - u) * e * du))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const A: f64 = SQRT_2 - 1.0;

    #[test]
    fn herglotz_examples() {
        let delta0 = CircleMeasure::dirac(0.0).unwrap();
        assert_eq!(herglotz_eval(&delta0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((herglotz_eval(&delta0, c(0.5, 0.0)).unwrap() - c(3.0, 0.0)).norm() < 1e-15);
        let sym = CircleMeasure::new(&[(0.0, 1.0), (PI, 1.0)]).unwrap();
        assert!((herglotz_eval(&sym, c(0.0, 0.5)).unwrap() - c(0.6, 0.0)).norm() < 1e-15);
        assert!(matches!(herglotz_eval(&sym, c(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn robertson_examples() {
        let koebe = SegmentMeasure::dirac(1.0).unwrap();
        assert!((robertson_eval(&koebe, c(0.5, 0.0)).unwrap().0 - c(2.0, 0.0)).norm() < 1e-15);
        let q0 = SegmentMeasure::dirac(0.0).unwrap();
        let (f, _) = robertson_eval(&q0, c(0.0, 0.5)).unwrap();
        assert!((f - c(0.0, 2.0 / 3.0)).norm() < 1e-15);
        let (f, fp) = robertson_eval(&q0, c(0.0, 0.0)).unwrap();
        assert_eq!((f, fp), (c(0.0, 0.0), c(1.0, 0.0)));
        assert!(matches!(robertson_eval(&koebe, c(1.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn series_examples() {
        let koebe = segment_series(&SegmentMeasure::dirac(1.0).unwrap(), 3);
        assert_eq!(koebe.coeffs(), PowerSeries::from_real(&[0.0, 1.0, 2.0, 3.0]).coeffs());
        let q0 = segment_series(&SegmentMeasure::dirac(0.0).unwrap(), 4);
        assert_eq!(q0.coeffs(), PowerSeries::from_real(&[0.0, 1.0, 0.0, -1.0, 0.0]).coeffs());
        let p = circle_series(&CircleMeasure::dirac(0.0).unwrap(), 2);
        assert_eq!(p.coeffs(), PowerSeries::from_real(&[1.0, 2.0, 2.0]).coeffs());
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((psi(c(0.0, A)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((psi(c(A, 0.0)).unwrap() - c(1.0 / SQRT_2, 0.0)).norm() < 1e-15);
        assert_eq!(psi_inv(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((psi_inv(c(0.0, 1.0)).unwrap() - c(0.0, A)).norm() < 1e-15);
        assert!(matches!(psi_inv(c(1.0, 0.0)), Err(Error::Branch(_))));
        assert!(matches!(psi_inv(c(-3.0, 0.0)), Err(Error::Branch(_))));
        assert!(psi_inv(c(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn slit_rep_examples() {
        let id = SegmentMeasure::dirac(0.0).unwrap();
        let z = c(0.3, -0.7);
        assert!((slit_rep_eval(&id, z).unwrap().0 - z).norm() < 1e-15);
        let one = SegmentMeasure::dirac(1.0).unwrap();
        assert!((slit_rep_eval(&one, c(0.5, 0.0)).unwrap().0 - c(1.0, 0.0)).norm() < 1e-15);
        let alpha = 1.1_f64;
        let lambda = (alpha / 2.0).sin().powi(2);
        let nu = SegmentMeasure::new(&[(-1.0, 1.0 - lambda), (1.0, lambda)]).unwrap();
        assert!(slit_rep_eval(&nu, Complex64::from_polar(1.0, alpha)).unwrap().1.norm() < 1e-14);
    }

    #[test]
    fn ft_examples() {
        let (v, _) = ft_eval(1.0, c(0.5, 0.0)).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-15);
        let (v, d) = ft_eval(0.5, c(0.0, A)).unwrap();
        assert!((v - c(0.0, 0.25)).norm() < 1e-15);
        assert!(d.norm() < 1e-14);
        assert!(matches!(ft_eval(0.5, c(-1.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(ft_eval(1.5, c(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn ft_r_examples() {
        let z = c(0.2, 0.3);
        assert_eq!(ft_r_eval(0.3, 1.0, z).unwrap(), ft_eval(0.3, z).unwrap());
        let (v, d) = ft_r_eval(0.7, 0.6, c(0.0, 0.0)).unwrap();
        assert_eq!(v, c(0.0, 0.0));
        assert!((d - c(1.0, 0.0)).norm() < 1e-15);
        let (_, d) = ft_r_eval(0.5, A / 0.45, c(0.0, 0.45)).unwrap();
        assert!(d.norm() < 1e-13);
    }

    #[test]
    fn goodman_examples() {
        assert_eq!(goodman_g(c(0.0, 0.0)).unwrap().0, c(0.0, 0.0));
        let z0 = c(1.0, SQRT_2) / 3.0;
        assert!((z0.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let diff = goodman_g(z0).unwrap().0 - goodman_g(-z0.conj()).unwrap().0;
        assert!(diff.norm() < 1e-12);
        assert!(goodman_in_s(c(0.5, 0.0)));
        assert!(!goodman_in_s(c(0.6, 0.6)));
    }

    #[test]
    fn picard_examples() {
        assert_eq!(picard_map(c(0.0, 0.0)).unwrap().0, c(0.0, 0.0));
        assert!((picard_map(c(1.0, 0.0)).unwrap().0 - c((-1f64).exp(), 0.0)).norm() < 1e-15);
        assert!((picard_map(c(0.0, 0.0)).unwrap().1 - c(4.0, 0.0)).norm() < 1e-15);
        assert!(matches!(picard_map(c(-1.0, 0.0)), Err(Error::Pole(_))));
    }
}
