use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::picard_map;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Branches tried before giving up.
const MAX_BRANCH: i64 = 400;

/// Solutions of `u e^{-u} = w` on branch `k`: fixed-point iteration of
/// `u = Log u - Log w - 2πik`, then Newton.
fn u_branch(w: Complex64, k: i64) -> Option<Complex64> {
    let shift = w.ln() + Complex64::new(0.0, TAU * k as f64);
    let mut u = -shift;
    if u.norm() < 1.0 {
        u = Complex64::new(2.0, 0.0) - shift;
    }
    for _ in 0..200 {
        let next = u.ln() - shift;
        if (next - u).norm() < 1e-15 * u.norm().max(1.0) {
            u = next;
            break;
        }
        u = next;
    }
    for _ in 0..50 {
        let e = (-u).exp();
        let f = u * e - w;
        let d = (ONE - u) * e;
        if d.norm() == 0.0 {
            break;
        }
        let step = f / d;
        u -= step;
        if step.norm() < 1e-16 * u.norm().max(1.0) {
            break;
        }
    }
    ((u * (-u).exp() - w).norm() < 1e-10 * w.norm().max(1.0)).then_some(u)
}

/// Root of `4z/(1+z)² = u` inside the disk.
fn invert_u(u: Complex64) -> Option<Complex64> {
    if u.norm() == 0.0 {
        return Some(Complex64::new(0.0, 0.0));
    }
    let root = (ONE - u).sqrt() * 2.0;
    let a = (Complex64::new(2.0, 0.0) - u + root) / u;
    let b = (Complex64::new(2.0, 0.0) - u - root) / u;
    let z = if a.norm() < b.norm() { a } else { b };
    (z.norm() < 1.0).then_some(z)
}

fn polish(w: Complex64, mut z: Complex64) -> Option<Complex64> {
    for _ in 0..30 {
        let (v, d) = picard_map(z).ok()?;
        let r = v - w;
        if r.norm() < 1e-15 || d.norm() == 0.0 {
            break;
        }
        let next = z - r / d;
        if next.norm() >= 1.0 {
            break;
        }
        z = next;
    }
    Some(z)
}

/// At least `k` distinct points of `𝔻 ∩ {|z + 1| < delta}` where
/// `u(z) e^{-u(z)} = w`. Branches are visited in the order
/// `1, -1, 2, -2, …`, so the returned points move towards `-1`.
pub fn picard_preimages(w: Complex64, delta: f64, k: usize) -> Result<Vec<Complex64>> {
    if w.norm() == 0.0 || !w.is_finite() {
        return Err(Error::InvalidInput("w must be a finite nonzero value".into()));
    }
    if !(delta > 0.0 && delta < 2.0) || k < 2 {
        return Err(Error::InvalidInput(format!("need delta in (0, 2) and k >= 2, got {delta}, {k}")));
    }
    let mut found: Vec<Complex64> = Vec::new();
    'branches: for m in 1..=MAX_BRANCH {
        for branch in [m, -m] {
            let Some(u) = u_branch(w, branch) else { continue };
            let Some(z) = invert_u(u).and_then(|z| polish(w, z)) else { continue };
            let residual = picard_map(z).map(|(v, _)| (v - w).norm()).unwrap_or(f64::INFINITY);
            if z.norm() < 1.0 && (z + 1.0).norm() < delta && residual < 1e-10 && found.iter().all(|p| (p - z).norm() > 1e-8) {
                found.push(z);
                if found.len() >= k {
                    break 'branches;
                }
            }
        }
    }
    if found.len() < k {
        return Err(Error::SearchFailure(format!(
            "found {} of {k} preimages of {w}: {:?}",
            found.len(),
            found.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()
        )));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_preimages_of_a_tenth() {
        let w = Complex64::new(0.1, 0.0);
        let pts = picard_preimages(w, 0.5, 3).unwrap();
        assert_eq!(pts.len(), 3);
        for z in &pts {
            assert!(z.norm() < 1.0 && (z + 1.0).norm() < 0.5);
            assert!((picard_map(*z).unwrap().0 - w).norm() < 1e-10);
        }
        let more = picard_preimages(w, 0.5, 8).unwrap();
        let d: Vec<f64> = more.iter().map(|z| (z + 1.0).norm()).collect();
        assert!(d.windows(2).all(|p| p[1] <= p[0] + 1e-12));
        assert!(d[7] < d[0]);
    }

    #[test]
    fn rejects_zero() {
        assert!(picard_preimages(Complex64::new(0.0, 0.0), 0.5, 3).is_err());
    }
}
