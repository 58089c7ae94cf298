//! Scalar abstraction: every numeric routine in this crate is generic over
//! the float width.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the solver works over: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Debug + Display + LowerExp + 'static {
    /// Convert an `f64` literal, rounding to the target width.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Convert a small nonnegative integer exactly.
    fn int(n: u32) -> Self {
        Self::from_u32(n).expect("u32 representable in scalar type")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + LowerExp + 'static {}
