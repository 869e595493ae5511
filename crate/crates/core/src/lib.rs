//! Numerical verification of waist, width and filling inequalities.
//!
//! Analytic code is generic over [`scalar::Real`]; the aliases below fix the
//! default precision used by the estimators and the command-line tool.

pub mod algebra;
pub mod content;
pub mod convex;
pub mod error;
pub mod filling;
pub mod fibrations;
pub mod integral_geometry;
pub mod isoperimetry;
pub mod linalg;
pub mod mesh;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod spaces;
pub mod sweepout;
pub mod transport;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default working precision.
pub type Scalar = f64;
pub type Matrix = linalg::Mat<Scalar>;
pub type Volumes = spaces::VolumeConstants<Scalar>;
/// Exact coordinates for PL chains.
pub type Rational = filling::Q;
