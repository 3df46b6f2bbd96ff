//! Scalar abstraction for the numerical core.
//!
//! All core math is generic over [`Real`], a floating-point scalar built on
//! `num-traits`. Concrete pipelines instantiate `f64` (see the type aliases
//! at the crate root); `f32` works for the geometric kernels but the shipped
//! tolerances assume double precision.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Build a constant from an `f64` literal.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant")
    }

    /// Build a constant from a count.
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize fits in scalar")
    }

    /// Widen to `f64` (exact for `f32`/`f64`).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar widens to f64")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    fn midpoint<T: Real>(a: T, b: T) -> T {
        (a + b) / T::of(2.0)
    }

    #[test]
    fn works_for_both_widths() {
        assert_eq!(midpoint(1.0f64, 3.0f64), 2.0);
        assert_eq!(midpoint(1.0f32, 3.0f32), 2.0);
        assert_eq!(f64::of_usize(7), 7.0);
        assert_eq!(3.5f32.as_f64(), 3.5);
    }
}
