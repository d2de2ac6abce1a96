//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All state vectors and operators are complex; the underlying real type is
//! a [`Real`]. `f64` is the working precision for the acceptance tolerances,
//! `f32` is supported with correspondingly looser thresholds.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub use nalgebra::Complex;

/// Real scalar usable as the component type of complex amplitudes.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Tolerance on `| ‖ψ‖ - 1 |` for a vector to count as a normalised state.
    fn norm_tol() -> Self;
    /// Relative singular-value / eigenvalue cut used for rank decisions.
    fn rank_tol() -> Self;
    /// Smallest eigenvalue an operator may have and still count as PSD (negated).
    fn psd_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn norm_tol() -> Self {
        1e-12
    }
    fn rank_tol() -> Self {
        1e-10
    }
    fn psd_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn norm_tol() -> Self {
        1e-5
    }
    fn rank_tol() -> Self {
        1e-5
    }
    fn psd_tol() -> Self {
        1e-5
    }
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
