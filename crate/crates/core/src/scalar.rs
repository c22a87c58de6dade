//! Floating-point abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Scalar type the geometry is generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Sum
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Lossy conversion used when building error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Returns `value + 2πk` for the integer `k` that brings it closest to `reference`.
pub fn unwrap_near<T: Scalar>(value: T, reference: T) -> T {
    let two_pi = T::TAU();
    let turns = ((reference - value) / two_pi).round();
    value + turns * two_pi
}

/// Signed difference `a - b` reduced to `(-π, π]`.
pub fn wrapped_difference<T: Scalar>(a: T, b: T) -> T {
    let d = a - b;
    d - (d / T::TAU()).round() * T::TAU()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unwrap_picks_nearest_branch() {
        assert!((unwrap_near(0.1, 2.0 * PI) - (0.1 + 2.0 * PI)).abs() < 1e-15);
        assert!((unwrap_near(-3.0, 3.0) - (2.0 * PI - 3.0)).abs() < 1e-15);
        assert_eq!(unwrap_near(1.0, 1.2), 1.0);
    }

    #[test]
    fn wrapped_difference_is_small() {
        let d = wrapped_difference(0.05, 2.0 * PI - 0.05);
        assert!((d - 0.1).abs() < 1e-14);
        let d32 = wrapped_difference(0.05f32, 2.0 * std::f32::consts::PI - 0.05);
        assert!((d32 - 0.1).abs() < 1e-5);
    }
}
