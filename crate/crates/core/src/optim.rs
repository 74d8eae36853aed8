//! Small deterministic solvers: Nelder–Mead simplex descent and bracketed
//! bisection.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    pub initial_step: f64,
    pub max_iter: usize,
    /// Stop once the simplex diameter falls below this.
    pub x_tol: f64,
    /// Stop once the spread of objective values falls below this.
    pub f_tol: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self { initial_step: 1e-2, max_iter: 2000, x_tol: 1e-13, f_tol: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes `f` from `x0`. Non-finite objective values act as walls.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Minimum {
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += cfg.initial_step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect();
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        values = idx.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|x| x.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < cfg.x_tol || (values[n] - values[0]).abs() <= cfg.f_tol && values[n].is_finite() {
            break;
        }

        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|x| x[k]).sum::<f64>() / n as f64).collect();
        let toward = |coef: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + coef * (simplex[n][k] - centroid[k])).collect() };

        let xr = toward(-1.0);
        let fr = eval(&xr);
        if fr < values[0] {
            let xe = toward(-2.0);
            let fe = eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = toward(-0.5);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = toward(0.5);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        for i in 1..=n {
            let x: Vec<f64> = (0..n).map(|k| simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k])).collect();
            values[i] = eval(&x);
            simplex[i] = x;
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Minimum { x: simplex[best].clone(), value: values[best], iterations }
}

/// Root of `f` on `[lo, hi]`, which must bracket a sign change.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, max_iter: usize) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::SearchFailure(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= x_tol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_minimum() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let cfg = NelderMeadConfig { initial_step: 0.5, max_iter: 5000, ..Default::default() };
        let m = nelder_mead(f, &[-1.2, 1.0], &cfg);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn walls_are_respected() {
        let f = |x: &[f64]| if x[0] < 0.5 { f64::INFINITY } else { x[0] * x[0] };
        let m = nelder_mead(f, &[2.0], &NelderMeadConfig { initial_step: 0.3, ..Default::default() });
        assert!(m.x[0] >= 0.5 && m.x[0] < 0.5 + 1e-9);
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_err());
    }
}
