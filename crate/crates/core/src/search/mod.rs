//! Extremal constructions and witness searches: critical points of the
//! `f_t` family, the two-atom measures with a prescribed boundary critical
//! point, the sheared `f_{1/2}` collision, radius bracketing, conjecture
//! scans, Picard multivalence and coefficient extremes.

pub mod coefficients;
pub mod conjecture;
pub mod picard;
pub mod radius;
pub mod theorem5;
pub mod witness;

pub use coefficients::{coefficient_extremes, CoefficientExtremes, ExtremeGrid};
pub use conjecture::{conjecture_scan, ConjectureId, ConjectureReport};
pub use picard::picard_preimages;
pub use radius::{radius_estimate, RadiusBracket, RadiusConfig, RadiusKind};
pub use theorem5::{theorem5_collision, theorem5_m, theorem5_map, Theorem5Closed};
pub use witness::{
    critical_t_for_boundary_point, nonconvexity_witness, proposition_measure, proposition_residual, scaled_critical_t,
    WitnessKind, WitnessReport,
};
