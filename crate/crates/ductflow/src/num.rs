//! Scalar abstraction: the solver core is generic over the floating-point
//! type. `f64` is what the CLI and the acceptance suite use; `f32` works for
//! the low-level kernels but is too coarse for the solver tolerances.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable throughout the solver.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn cst(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal must convert")
    }

    /// Lossy conversion to `f64` (reports, exports).
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar must convert to f64")
    }

    /// Conversion from a grid index.
    #[inline]
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize must convert")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    fn hypot_generic<F: Scalar>(a: F, b: F) -> F {
        (a * a + b * b).sqrt()
    }

    #[test]
    fn works_for_both_widths() {
        assert!((hypot_generic(3.0f32, 4.0f32) - 5.0).abs() < 1e-6);
        assert!((hypot_generic(3.0f64, 4.0f64) - 5.0).abs() < 1e-15);
        assert_eq!(f64::cst(0.5), 0.5);
        assert_eq!(f64::of_usize(7), 7.0);
    }
}
