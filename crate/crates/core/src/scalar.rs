//! Real scalar abstraction underlying all complex linear algebra.
//!
//! The numerical kernel is generic over the real field; `f64` is the
//! default used by the domain modules (see the crate-root aliases).

use num_traits::{Float, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for tolerances and constants.
    fn real(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite f64 constant")
    }

    /// Conversion from a usize dimension.
    fn from_dim(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("dimension fits in scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
