//! Scalar abstraction for the generic numerics.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar accepted by the generic numerics (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal. Lossy for narrower types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Returns `Some(n)` when `x` is a positive integer (within a few ulps).
pub(crate) fn as_positive_integer<T: Real>(x: T) -> Option<usize> {
    let r = x.round();
    if r >= T::one() && (x - r).abs() <= T::epsilon() * T::lit(8.0) * r {
        r.to_usize()
    } else {
        None
    }
}
