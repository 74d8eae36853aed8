//! Atomic probability measures on the segment `[-1, 1]` and on the unit circle.
//!
//! A [`SegmentMeasure`] generates a typically real analytic function through the
//! Robertson kernel `z / (1 - 2tz + z^2)`, a [`CircleMeasure`] generates a
//! Carathéodory function through the Herglotz kernel `(1 + ηz) / (1 - ηz)`.
//! Both are stored normalized: positive weights summing to one, atoms sorted
//! and merged.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positions closer than this are treated as the same atom.
pub const MERGE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentAtom {
    pub t: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleAtom {
    pub theta: f64,
    pub w: f64,
}

impl CircleAtom {
    /// The point `η = e^{iθ}` carrying this atom.
    pub fn eta(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

/// Probability measure ν on `[-1, 1]` with finitely many atoms.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SegmentMeasure {
    atoms: Vec<SegmentAtom>,
}

/// Probability measure μ on the unit circle with finitely many atoms.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CircleMeasure {
    atoms: Vec<CircleAtom>,
}

fn check_weights<I: Iterator<Item = f64>>(weights: I) -> Result<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for w in weights {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidMeasure(format!("weight {w} is not a finite nonnegative number")));
        }
        total += w;
        count += 1;
    }
    if count == 0 {
        return Err(Error::InvalidMeasure("empty atom list".into()));
    }
    if total <= 0.0 {
        return Err(Error::InvalidMeasure("total weight is not positive".into()));
    }
    Ok(total)
}

impl SegmentMeasure {
    /// Normalizes raw `(t, w)` pairs: rescales weights to sum one, drops
    /// zero weights, sorts by `t` and merges coincident positions.
    pub fn new(raw: &[(f64, f64)]) -> Result<Self> {
        let total = check_weights(raw.iter().map(|&(_, w)| w))?;
        let mut atoms: Vec<SegmentAtom> = Vec::with_capacity(raw.len());
        for &(t, w) in raw {
            if !t.is_finite() || !(-1.0..=1.0).contains(&t) {
                return Err(Error::InvalidMeasure(format!("atom position {t} outside [-1, 1]")));
            }
            if w > 0.0 {
                atoms.push(SegmentAtom { t, w: w / total });
            }
        }
        atoms.sort_by(|a, b| a.t.total_cmp(&b.t));
        let mut merged: Vec<SegmentAtom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if (a.t - last.t).abs() <= MERGE_TOLERANCE => last.w += a.w,
                _ => merged.push(a),
            }
        }
        Ok(Self { atoms: merged })
    }

    /// Unit point mass at `t`.
    pub fn dirac(t: f64) -> Result<Self> {
        Self::new(&[(t, 1.0)])
    }

    pub fn atoms(&self) -> &[SegmentAtom] {
        &self.atoms
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }
}

impl CircleMeasure {
    /// Normalizes raw `(θ, w)` pairs; angles are reduced into `[0, 2π)`.
    pub fn new(raw: &[(f64, f64)]) -> Result<Self> {
        let total = check_weights(raw.iter().map(|&(_, w)| w))?;
        let mut atoms: Vec<CircleAtom> = Vec::with_capacity(raw.len());
        for &(theta, w) in raw {
            if !theta.is_finite() {
                return Err(Error::InvalidMeasure(format!("atom angle {theta} is not finite")));
            }
            if w > 0.0 {
                let mut theta = theta.rem_euclid(TAU);
                if theta >= TAU - MERGE_TOLERANCE {
                    theta = 0.0;
                }
                atoms.push(CircleAtom { theta, w: w / total });
            }
        }
        atoms.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        let mut merged: Vec<CircleAtom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if (a.theta - last.theta).abs() <= MERGE_TOLERANCE => last.w += a.w,
                _ => merged.push(a),
            }
        }
        Ok(Self { atoms: merged })
    }

    pub fn dirac(theta: f64) -> Result<Self> {
        Self::new(&[(theta, 1.0)])
    }

    pub fn atoms(&self) -> &[CircleAtom] {
        &self.atoms
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }
}

/// On-disk measure file: `{"nu":[{"t":..,"w":..}], "mu":[{"theta":..,"w":..}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureFile {
    pub nu: Vec<SegmentAtom>,
    pub mu: Vec<CircleAtom>,
}

impl MeasureFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("measure JSON: {e}")))
    }

    /// Normalizes both halves of the file.
    pub fn measures(&self) -> Result<(CircleMeasure, SegmentMeasure)> {
        let nu: Vec<(f64, f64)> = self.nu.iter().map(|a| (a.t, a.w)).collect();
        let mu: Vec<(f64, f64)> = self.mu.iter().map(|a| (a.theta, a.w)).collect();
        Ok((CircleMeasure::new(&mu)?, SegmentMeasure::new(&nu)?))
    }

    pub fn from_measures(mu: &CircleMeasure, nu: &SegmentMeasure) -> Self {
        Self { nu: nu.atoms().to_vec(), mu: mu.atoms().to_vec() }
    }
}

fn dirichlet_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect()
}

fn draw(rng: &mut ChaCha8Rng, k: usize) -> (SegmentMeasure, CircleMeasure) {
    let ts: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let tw = dirichlet_weights(rng, k);
    let thetas: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..TAU)).collect();
    let thw = dirichlet_weights(rng, k);
    let nu: Vec<(f64, f64)> = ts.into_iter().zip(tw).collect();
    let mu: Vec<(f64, f64)> = thetas.into_iter().zip(thw).collect();
    // Exp(1) draws are positive almost surely, so normalization cannot fail.
    (
        SegmentMeasure::new(&nu).expect("sampled segment measure"),
        CircleMeasure::new(&mu).expect("sampled circle measure"),
    )
}

/// Draws `k` atoms for each measure: positions uniform, weights Dirichlet(1, …, 1).
///
/// With `k = 1` the pair generates an extreme point of the harmonic class.
pub fn sample_measures(k: usize, seed: u64) -> (SegmentMeasure, CircleMeasure) {
    assert!(k >= 1, "sample_measures needs at least one atom");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw(&mut rng, k)
}

/// Per-sample stream for parallel scans: the result depends only on
/// `(seed, index)`, never on scheduling. The atom count is drawn uniformly
/// from `1..=max_atoms`.
pub fn sample_indexed(seed: u64, index: u64, max_atoms: usize) -> (SegmentMeasure, CircleMeasure) {
    assert!(max_atoms >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let k = rng.random_range(1..=max_atoms);
    draw(&mut rng, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescales_single_atom() {
        let m = SegmentMeasure::new(&[(1.0, 2.0)]).unwrap();
        assert_eq!(m.atoms(), &[SegmentAtom { t: 1.0, w: 1.0 }]);
    }

    #[test]
    fn merges_duplicates() {
        let m = SegmentMeasure::new(&[(0.5, 1.0), (0.5, 1.0)]).unwrap();
        assert_eq!(m.atoms(), &[SegmentAtom { t: 0.5, w: 1.0 }]);
    }

    #[test]
    fn rescales_and_sorts() {
        let m = SegmentMeasure::new(&[(1.0, 3.0), (-1.0, 1.0)]).unwrap();
        assert_eq!(m.atoms(), &[SegmentAtom { t: -1.0, w: 0.25 }, SegmentAtom { t: 1.0, w: 0.75 }]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(SegmentMeasure::new(&[]), Err(Error::InvalidMeasure(_))));
        assert!(matches!(SegmentMeasure::new(&[(0.0, 0.0)]), Err(Error::InvalidMeasure(_))));
        assert!(matches!(SegmentMeasure::new(&[(0.0, -1.0)]), Err(Error::InvalidMeasure(_))));
        assert!(matches!(SegmentMeasure::new(&[(1.5, 1.0)]), Err(Error::InvalidMeasure(_))));
        assert!(matches!(CircleMeasure::new(&[(0.0, f64::NAN)]), Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn circle_angles_wrap_and_merge() {
        let m = CircleMeasure::new(&[(TAU, 1.0), (0.0, 1.0), (-std::f64::consts::PI, 2.0)]).unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert_eq!(m.atoms()[0].theta, 0.0);
        assert!((m.atoms()[0].w - 0.5).abs() < 1e-15);
        assert!((m.atoms()[1].theta - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_measures(5, 9), sample_measures(5, 9));
        assert_ne!(sample_measures(5, 9), sample_measures(5, 10));
        assert_eq!(sample_indexed(3, 17, 8), sample_indexed(3, 17, 8));
        let (nu, mu) = sample_measures(1, 123);
        assert_eq!(nu.atoms().len(), 1);
        assert_eq!(mu.atoms().len(), 1);
    }

    #[test]
    fn sampled_weights_sum_to_one() {
        let (nu, mu) = sample_measures(8, 42);
        assert!((nu.total_weight() - 1.0).abs() < 1e-12);
        assert!((mu.total_weight() - 1.0).abs() < 1e-12);
        assert!(nu.atoms().iter().all(|a| a.w > 0.0 && (-1.0..=1.0).contains(&a.t)));
        assert!(mu.atoms().iter().all(|a| a.w > 0.0 && (0.0..TAU).contains(&a.theta)));
    }

    #[test]
    fn measure_file_round_trip() {
        let text = r#"{"nu":[{"t":0.5,"w":1.0}],"mu":[{"theta":0.0,"w":2.0},{"theta":1.0,"w":2.0}]}"#;
        let file = MeasureFile::from_json(text).unwrap();
        let (mu, nu) = file.measures().unwrap();
        assert_eq!(nu.atoms().len(), 1);
        assert_eq!(mu.atoms()[1].w, 0.5);
        assert!(MeasureFile::from_json("{\"nu\":3}").is_err());
    }
}
