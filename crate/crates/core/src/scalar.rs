//! Scalar abstraction shared by every solver.
//!
//! All geometry and root finding is written against [`Real`], which is
//! implemented for `f32` and `f64`. Thresholds are stated once as `f64`
//! literals and converted with [`Real::lit`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the solvers.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this scalar type.
    #[inline(always)]
    fn lit(x: f64) -> Self {
        // Every f64 literal is representable (possibly rounded) in f32/f64.
        Self::from_f64(x).unwrap()
    }

    /// A contract tolerance: `base`, widened to a few ulps for low-precision
    /// scalars so that checks like "unit within 1e-12" stay meaningful in f32.
    #[inline]
    fn tolerance(base: f64) -> Self {
        Self::lit(base).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline(always)]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
