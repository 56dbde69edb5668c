//! Floating-point scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar type the transforms are generic over. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + Default
    + ndarray::ScalarOperand
    + 'static
{
    fn of(x: f64) -> Self;

    fn as_f64(self) -> f64;

    /// Default stopping threshold for Jacobi sweeps, relative to the largest entry.
    fn jacobi_tolerance() -> Self {
        Self::of(1e-12).max(Self::epsilon() * Self::of(4.0))
    }

    fn from_usize(n: usize) -> Self {
        Self::of(n as f64)
    }
}

impl Scalar for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }

    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn of(x: f64) -> Self {
        x
    }

    fn as_f64(self) -> f64 {
        self
    }
}

/// Lift a real value into the complex plane.
#[inline]
pub fn re<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
