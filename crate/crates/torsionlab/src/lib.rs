//! Numerical laboratory for the Saint Venant torsion problem `Δu = −1`, `u = 0` on `∂Ω`.
//!
//! The crate solves for the torsion function on planar polygonal and cuspidal
//! domains, integrates `u^{−β}` with quadrature that resolves the linear zero of
//! `u` at the boundary, and checks closed-form barrier constants, corner
//! exponents and asymptotic laws against the computed solutions.

pub mod barriers;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod measures;
pub mod quad;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};

/// A point in the plane.
pub type Point = [f64; 2];
