use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{boundary_univalence_certify, Outcome, Witness};
use crate::error::{Error, Result};
use crate::maps::{AnalyticMap, PlaneMap};
use crate::measures::sample_indexed;
use crate::region::Region;
use crate::series::DEFAULT_ORDER;
use crate::shear::shear;

use super::witness::{lens_critical_witness, WITNESS_RESIDUAL};

/// `√6 - √5`
pub fn sqrt6_minus_sqrt5() -> f64 {
    6f64.sqrt() - 5f64.sqrt()
}

pub const DEFAULT_EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];

pub const MAX_SAMPLE_ATOMS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusKind {
    /// Sheared maps of the harmonic class.
    Ru,
    /// Analytic typically real functions.
    LensFamily,
}

impl FromStr for RadiusKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ru" => Ok(Self::Ru),
            "lens" | "lens-family" | "t" => Ok(Self::LensFamily),
            other => Err(Error::InvalidInput(format!("unknown radius kind '{other}'"))),
        }
    }
}

impl fmt::Display for RadiusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ru => "ru",
            Self::LensFamily => "lens-family",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusConfig {
    pub kind: RadiusKind,
    pub samples: usize,
    pub resolution: usize,
    pub seed: u64,
    pub epsilons: Vec<f64>,
    /// Bisection stops once the bracket is narrower than this.
    pub tolerance: f64,
}

impl RadiusConfig {
    pub fn new(kind: RadiusKind, samples: usize, resolution: usize, seed: u64) -> Self {
        Self { kind, samples, resolution, seed, epsilons: DEFAULT_EPSILONS.to_vec(), tolerance: 1e-4 }
    }
}

/// Analytic upper-bound witness with a critical point at `|z0| = √2 - 1 + ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonWitness {
    pub epsilon: f64,
    pub z0: [f64; 2],
    pub t: f64,
    pub scale: f64,
    pub residual: f64,
    pub r_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusTrial {
    pub r: f64,
    pub all_certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleCollision {
    pub sample: u64,
    pub r: f64,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusBracket {
    pub kind: RadiusKind,
    pub r_lo: f64,
    pub r_hi: f64,
    pub samples: usize,
    pub resolution: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub epsilon_witnesses: Vec<EpsilonWitness>,
    pub collisions: Vec<SampleCollision>,
    pub trials: Vec<RadiusTrial>,
}

/// The map of sample `index` for the given class.
pub fn sampled_map(kind: RadiusKind, seed: u64, index: u64) -> Result<Arc<dyn PlaneMap>> {
    let (nu, mu) = sample_indexed(seed, index, MAX_SAMPLE_ATOMS);
    Ok(match kind {
        RadiusKind::Ru => Arc::new(shear(&mu, &nu, DEFAULT_ORDER)?),
        RadiusKind::LensFamily => Arc::new(AnalyticMap::robertson(nu)),
    })
}

/// Brackets the radius of univalence of the class. The upper end comes from
/// analytic critical-point witnesses just outside `√2 - 1` and from
/// re-verified collisions among sampled maps; the lower end is the largest
/// radius, found by bisection from `0.999(√6 - √5)`, at which every sampled
/// map certifies on the centered disk.
pub fn radius_estimate(cfg: &RadiusConfig) -> Result<RadiusBracket> {
    if cfg.epsilons.is_empty() {
        return Err(Error::InvalidInput("at least one epsilon is required".into()));
    }
    let mut epsilon_witnesses = Vec::new();
    for &eps in &cfg.epsilons {
        let (sc, z0) = lens_critical_witness(eps)?;
        if sc.residual >= WITNESS_RESIDUAL {
            return Err(Error::Falsification(format!("critical witness at epsilon {eps} has residual {}", sc.residual)));
        }
        epsilon_witnesses.push(EpsilonWitness {
            epsilon: eps,
            z0: [z0.re, z0.im],
            t: sc.t,
            scale: sc.r,
            residual: sc.residual,
            r_hi: z0.norm(),
        });
    }
    let mut r_hi = epsilon_witnesses.iter().map(|w| w.r_hi).fold(f64::INFINITY, f64::min);

    let maps: Vec<Arc<dyn PlaneMap>> = (0..cfg.samples as u64).map(|i| sampled_map(cfg.kind, cfg.seed, i)).collect::<Result<_>>()?;
    let mut trials = Vec::new();
    let mut collisions = Vec::new();
    let mut test = |r: f64, collisions: &mut Vec<SampleCollision>| -> Result<bool> {
        let region = Region::centered_disk(r)?;
        let verdicts = maps
            .par_iter()
            .map(|m| boundary_univalence_certify(&**m, &region, cfg.resolution))
            .collect::<Result<Vec<_>>>()?;
        let mut ok = true;
        for (i, v) in verdicts.iter().enumerate() {
            match v.outcome {
                Outcome::CertifiedAtResolution => {}
                Outcome::Collision => {
                    ok = false;
                    if let Some(w) = v.witness {
                        collisions.push(SampleCollision { sample: i as u64, r, witness: w });
                    }
                }
                Outcome::Inconclusive => ok = false,
            }
        }
        trials.push(RadiusTrial { r, all_certified: ok });
        Ok(ok)
    };

    let mut lo = 0.999 * sqrt6_minus_sqrt5();
    let mut hi = r_hi;
    if !test(lo, &mut collisions)? {
        hi = lo;
        lo = 0.0;
    }
    while hi - lo > cfg.tolerance {
        let mid = 0.5 * (lo + hi);
        if test(mid, &mut collisions)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    for c in &collisions {
        let reach = c.witness.z1.norm().max(c.witness.z2.norm());
        r_hi = r_hi.min(reach.max(lo + f64::EPSILON));
    }
    Ok(RadiusBracket {
        kind: cfg.kind,
        r_lo: lo,
        r_hi,
        samples: cfg.samples,
        resolution: cfg.resolution,
        seed: cfg.seed,
        tolerance: cfg.tolerance,
        epsilon_witnesses,
        collisions,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn analytic_witnesses_only() {
        let b = radius_estimate(&RadiusConfig::new(RadiusKind::Ru, 0, 256, 1)).unwrap();
        assert!(b.r_hi <= SQRT_2 - 1.0 + 1e-4 + 1e-12);
        assert!((b.r_hi - (SQRT_2 - 1.0 + 1e-4)).abs() < 1e-15);
        assert!(b.r_lo < b.r_hi && b.r_lo > 0.0);
        assert_eq!(b.epsilon_witnesses.len(), 3);
    }

    #[test]
    fn small_sampled_bracket_is_deterministic() {
        let cfg = RadiusConfig { tolerance: 1e-2, ..RadiusConfig::new(RadiusKind::Ru, 4, 256, 7) };
        let a = radius_estimate(&cfg).unwrap();
        let b = radius_estimate(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.r_lo >= sqrt6_minus_sqrt5() - 1e-3);
        assert!(a.r_hi <= SQRT_2 - 1.0 + 1e-3);
    }
}
