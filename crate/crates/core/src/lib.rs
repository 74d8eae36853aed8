//! Typically real harmonic maps of the unit disk.
//!
//! Maps are built by shearing: a typically real analytic `F` (a Robertson
//! sum over an atomic measure ν on `[-1, 1]`) and a Carathéodory function `p`
//! (a Herglotz sum over an atomic measure μ on the circle) determine
//! `f = h + conj(g)` with `h - g = F` and `g'/h' = (p - 1)/(p + 1)`.
//! The certifiers then test typical reality, sense preservation and
//! univalence at a stated resolution, and the search routines construct the
//! extremal witnesses that bound the univalence regions of the class.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod maps;
pub mod measures;
pub mod optim;
pub mod quadrature;
pub mod region;
pub mod search;
pub mod series;
pub mod shear;

pub use error::{Error, Result};
pub use maps::{MapRegistry, PlaneMap};
