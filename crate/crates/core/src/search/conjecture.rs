use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{
    boundary_univalence_certify, boundary_univalence_certify_with, collision_search, local_univalence_scan, CertifyOptions,
    Outcome, Witness,
};
use crate::error::{Error, Result};
use crate::maps::{AnalyticMap, PlaneMap};
use crate::measures::sample_indexed;
use crate::region::Region;

use super::radius::{radius_estimate, sampled_map, RadiusBracket, RadiusConfig, RadiusKind, MAX_SAMPLE_ATOMS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjectureId {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    Open3,
}

impl FromStr for ConjectureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" => Ok(Self::One),
            "2" => Ok(Self::Two),
            "open3" | "3" => Ok(Self::Open3),
            other => Err(Error::InvalidInput(format!("unknown conjecture id '{other}'"))),
        }
    }
}

impl fmt::Display for ConjectureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::One => "1",
            Self::Two => "2",
            Self::Open3 => "open3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfirmedCollision {
    pub sample: u64,
    pub witness: Witness,
    pub reverified_resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfLensScan {
    pub certified: usize,
    pub inconclusive: Vec<u64>,
    /// Collisions at the scan resolution that did not survive re-verification.
    pub unconfirmed: Vec<u64>,
    pub confirmed: Vec<ConfirmedCollision>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoodmanCheck {
    pub inner_radius: f64,
    pub certified_inner: bool,
    pub outer_radius: f64,
    pub collision: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Open3Scan {
    pub radii: Vec<f64>,
    pub members: usize,
    pub locally_univalent: usize,
    pub certified: Vec<usize>,
    pub collisions: Vec<usize>,
    pub goodman: GoodmanCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub id: ConjectureId,
    pub samples: usize,
    pub resolution: usize,
    pub seed: u64,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<RadiusBracket>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_lens: Option<HalfLensScan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub open3: Option<Open3Scan>,
}

impl ConjectureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn inv_sqrt3() -> f64 {
    1.0 / 3f64.sqrt()
}

/// Runs a scan over sampled maps. Never claims a proof: the statement either
/// reports the absence of counterexamples at the given resolution and sample
/// count, or lists re-verified counterexamples.
pub fn conjecture_scan(id: ConjectureId, samples: usize, resolution: usize, seed: u64) -> Result<ConjectureReport> {
    let mut report = ConjectureReport { id, samples, resolution, seed, statement: String::new(), radius: None, half_lens: None, open3: None };
    match id {
        ConjectureId::One => {
            let b = radius_estimate(&RadiusConfig::new(RadiusKind::Ru, samples, resolution, seed))?;
            report.statement = format!(
                "radius bracket [{:.6}, {:.6}] from {samples} samples at resolution {resolution}; no counterexample below r_lo",
                b.r_lo, b.r_hi
            );
            report.radius = Some(b);
        }
        ConjectureId::Two => {
            let scan = half_lens_scan(samples, resolution, seed)?;
            report.statement = if scan.confirmed.is_empty() {
                format!("no counterexample at resolution {resolution} with {samples} samples")
            } else {
                format!("{} re-verified counterexample(s) at resolution {resolution}", scan.confirmed.len())
            };
            report.half_lens = Some(scan);
        }
        ConjectureId::Open3 => {
            let scan = open3_scan(samples, resolution, seed)?;
            report.statement = format!(
                "{} of {} sampled members locally univalent on D(0, 1/sqrt3); Goodman G certified on D(0, {:.6}): {}, collision beyond 1/sqrt3: {}",
                scan.locally_univalent,
                scan.members,
                scan.goodman.inner_radius,
                scan.goodman.certified_inner,
                scan.goodman.collision.is_some()
            );
            report.open3 = Some(scan);
        }
    }
    Ok(report)
}

/// Certifies sampled sheared maps on the half-lens; collisions are
/// re-verified at double resolution from the same witness seeds.
pub fn half_lens_scan(samples: usize, resolution: usize, seed: u64) -> Result<HalfLensScan> {
    let region = Region::half_lens();
    let outcomes = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<(u64, Outcome, Option<ConfirmedCollision>)> {
            let map = sampled_map(RadiusKind::Ru, seed, i)?;
            let v = boundary_univalence_certify(&*map, &region, resolution)?;
            let confirmed = match (v.outcome, v.witness) {
                (Outcome::Collision, Some(w)) => {
                    let opts = CertifyOptions { seeds: vec![(w.z1, w.z2)] };
                    let again = boundary_univalence_certify_with(&*map, &region, 2 * resolution, &opts)?;
                    match (again.outcome, again.witness) {
                        (Outcome::Collision, Some(w2)) => {
                            Some(ConfirmedCollision { sample: i, witness: w2, reverified_resolution: 2 * resolution })
                        }
                        _ => None,
                    }
                }
                _ => None,
            };
            Ok((i, v.outcome, confirmed))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut scan = HalfLensScan { certified: 0, inconclusive: Vec::new(), unconfirmed: Vec::new(), confirmed: Vec::new() };
    for (i, outcome, confirmed) in outcomes {
        match (outcome, confirmed) {
            (Outcome::CertifiedAtResolution, _) => scan.certified += 1,
            (Outcome::Inconclusive, _) => scan.inconclusive.push(i),
            (Outcome::Collision, Some(c)) => scan.confirmed.push(c),
            (Outcome::Collision, None) => scan.unconfirmed.push(i),
        }
    }
    Ok(scan)
}

/// Goodman's function: certified just inside `1/√3`, and collided just
/// outside from the seed pair `(z0, -conj(z0))`, `z0 = (1 + i√2)/3`.
pub fn goodman_check(resolution: usize) -> Result<GoodmanCheck> {
    let g = AnalyticMap::new("goodman", crate::kernels::goodman_g);
    let inner_radius = 0.99 * inv_sqrt3();
    let outer_radius = inv_sqrt3() + 0.01;
    let certified_inner = boundary_univalence_certify(&g, &Region::centered_disk(inner_radius)?, resolution)?.is_certified();
    let z0 = Complex64::new(1.0, 2f64.sqrt()) / 3.0;
    let collision = collision_search(&g, &Region::centered_disk(outer_radius)?, &[(z0, -z0.conj())]);
    Ok(GoodmanCheck { inner_radius, certified_inner, outer_radius, collision })
}

/// Sampled analytic members that are locally univalent on `D(0, 1/√3)`,
/// certified on disks between `√2 - 1` and `1/√3`, together with Goodman's G.
pub fn open3_scan(samples: usize, resolution: usize, seed: u64) -> Result<Open3Scan> {
    let radii = vec![0.45, 0.5, 0.55, 0.99 * inv_sqrt3()];
    let outer = Region::centered_disk(inv_sqrt3())?;
    let rows = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<Option<Vec<Outcome>>> {
            let (nu, _) = sample_indexed(seed, i, MAX_SAMPLE_ATOMS);
            let f = AnalyticMap::robertson(nu);
            let scan = local_univalence_scan(&f, &outer, 100)?;
            if scan.min_jacobian <= 0.0 || !scan.critical_points.is_empty() {
                return Ok(None);
            }
            let outcomes = radii
                .iter()
                .map(|&r| Ok(boundary_univalence_certify(&f as &dyn PlaneMap, &Region::centered_disk(r)?, resolution)?.outcome))
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(outcomes))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut certified = vec![0; radii.len()];
    let mut collisions = vec![0; radii.len()];
    let mut locally_univalent = 0;
    for row in rows.into_iter().flatten() {
        locally_univalent += 1;
        for (k, o) in row.iter().enumerate() {
            match o {
                Outcome::CertifiedAtResolution => certified[k] += 1,
                Outcome::Collision => collisions[k] += 1,
                Outcome::Inconclusive => {}
            }
        }
    }
    Ok(Open3Scan { radii, members: samples, locally_univalent, certified, collisions, goodman: goodman_check(resolution)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        assert_eq!("2".parse::<ConjectureId>().unwrap(), ConjectureId::Two);
        assert_eq!("open3".parse::<ConjectureId>().unwrap(), ConjectureId::Open3);
        assert!("9".parse::<ConjectureId>().is_err());
    }

    #[test]
    fn goodman_inner_and_outer() {
        let g = goodman_check(1024).unwrap();
        assert!(g.certified_inner);
        assert!(g.collision.unwrap().df < 1e-9);
    }

    #[test]
    fn small_half_lens_scan_is_reproducible() {
        let a = conjecture_scan(ConjectureId::Two, 3, 512, 11).unwrap();
        let b = conjecture_scan(ConjectureId::Two, 3, 512, 11).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.half_lens.unwrap().confirmed.is_empty());
    }
}
