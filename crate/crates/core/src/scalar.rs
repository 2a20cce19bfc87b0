//! Scalar abstraction shared by every numerical routine in the crate.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Everything in this crate is generic over `Real`; the aliases at the crate
/// root pin the common `f64` instantiation.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static {}

impl<T> Real for T where T: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// Lossy conversion back to `f64` (diagnostics, error payloads, output).
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Symmetry tolerance: [`SYMMETRY_TOL`](crate::symplectic::SYMMETRY_TOL),
/// widened to a few hundred ulps for single precision.
pub fn symmetry_tol<T: Real>() -> T {
    lit::<T>(crate::symplectic::SYMMETRY_TOL).max(T::default_epsilon() * lit::<T>(100.0))
}

/// Positivity tolerance: [`PSD_TOL`](crate::symplectic::PSD_TOL), widened
/// for single precision.
pub fn psd_tol<T: Real>() -> T {
    lit::<T>(crate::symplectic::PSD_TOL).max(T::default_epsilon() * lit::<T>(1000.0))
}
