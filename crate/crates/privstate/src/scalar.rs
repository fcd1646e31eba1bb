//! Scalar abstraction for the core linear algebra.
//!
//! Everything in [`crate::qcore`], [`crate::pdit`], [`crate::metrics`] and
//! [`crate::channels`] is generic over a real scalar implementing [`Real`];
//! complex entries are `num_complex::Complex<T>`. The protocol and CLI
//! layers use the `f64` aliases exported from the crate root, which is the
//! configuration all stated tolerances refer to.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar usable as the component type of quantum states.
pub trait Real: RealField + FromPrimitive + ToPrimitive + Copy {
    /// Base tolerance for validity checks (hermiticity, trace, unitarity).
    ///
    /// `1e-10` for `f64` per the documented contracts; scaled up for `f32`
    /// where that precision does not exist.
    fn validity_eps() -> Self;

    /// Eigenvalues below this magnitude are treated as zero rank.
    fn rank_eps() -> Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f64 {
    fn validity_eps() -> Self {
        1e-10
    }

    fn rank_eps() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn validity_eps() -> Self {
        1e-4
    }

    fn rank_eps() -> Self {
        1e-6
    }
}

/// Complex number with real part `x` and zero imaginary part.
pub fn re<T: Real>(x: f64) -> Complex<T> {
    Complex::new(T::from_f64_lossy(x), T::zero())
}

/// Complex number from two `f64` components.
pub fn cpx<T: Real>(x: f64, y: f64) -> Complex<T> {
    Complex::new(T::from_f64_lossy(x), T::from_f64_lossy(y))
}
