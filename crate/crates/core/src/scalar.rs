//! Scalar abstraction for the simulator and the network builders.
//!
//! Everything in [`crate::qcore`] and [`crate::networks`] is written against
//! [`Real`], so the same code runs in single or double precision. The
//! experiment drivers pin `f64` through the aliases in the crate root.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable as the real part of simulator amplitudes.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance for structural checks (unitarity, normalization,
    /// hermiticity). Scaled to the precision of the type.
    const TOLERANCE: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn tol() -> Self {
        Self::lit(Self::TOLERANCE)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }
}

impl Real for f32 {
    const TOLERANCE: f64 = 1e-4;
}

impl Real for f64 {
    const TOLERANCE: f64 = 1e-10;
}

/// Complex amplitude over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_track_precision() {
        assert!(f32::tol() > f32::EPSILON * 100.0);
        assert!(f64::tol() > f64::EPSILON * 100.0);
        assert_eq!(f64::lit(0.5), 0.5);
        assert_eq!(f32::lit(0.25).as_f64(), 0.25);
    }
}
