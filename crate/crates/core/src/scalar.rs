//! Scalar abstraction shared by every module.
//!
//! All numerics are generic over a real floating-point type `T` (`f32` or
//! `f64`); matrices hold `Complex<T>` entries. The trait bundles what the
//! dense kernels (faer) and the scalar code (num-traits) each need.

use std::fmt::{Debug, Display};

use faer::Mat;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar usable throughout the crate.
pub trait Real:
    faer::traits::RealField
    + Float
    + FloatConst
    + FromPrimitive
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Dense complex matrix over `T`.
pub type CMat<T> = Mat<Complex<T>>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

/// A threshold given in double precision, floored at a small multiple of the
/// machine epsilon of `T` so single precision gets a usable cutoff.
#[inline]
pub fn thresh<T: Real>(x: f64) -> T {
    let floor = T::epsilon() * lit(64.0);
    Float::max(lit(x), floor)
}

#[inline]
pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}
