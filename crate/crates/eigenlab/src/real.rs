//! Scalar abstraction for the numerical kernels.
//!
//! Everything in the math core is generic over [`Real`], so the same code
//! runs in `f32` or `f64`. Concrete `f64` aliases live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::LinalgScalar;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + LinalgScalar
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion from `f64` literals and precomputed constants.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }

    /// Conversion to `f64` for reporting and cross-type comparisons.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize converts to Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}
