//! Scalar abstraction shared by the analytic parts of the crate.
//!
//! Volume constants, quadrature, transport maps and the closed-form fiber
//! volumes are written against [`Real`], so they run in `f32` or `f64`.
//! Monte-Carlo estimators are `f64` only.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// floating point: f32 or f64
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// Absolute tolerance a quadrature can honestly reach in this type.
    fn quad_tolerance() -> Self {
        Self::lit(1e-13).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
