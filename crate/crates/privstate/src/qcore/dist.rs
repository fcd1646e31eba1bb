//! Distances, fidelity and the binary entropy.

use super::density::DensityMatrix;
use super::eigen::{hermitian_eigenvalues, hermitian_trace_norm, psd_sqrt};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_same_layout<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<()> {
    if a.layout() != b.layout() {
        return Err(Error::LayoutMismatch(
            "states live on different layouts".into(),
        ));
    }
    Ok(())
}

/// Trace distance `½ ‖ρ − σ‖_tr`, in `[0, 1]`.
///
/// The difference is taken in a canonical operand order so the result is
/// exactly symmetric in its arguments.
pub fn trace_distance<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    check_same_layout(a, b)?;
    let (first, second) = if canonical_le(a, b) { (a, b) } else { (b, a) };
    let diff = first.entries() - second.entries();
    Ok(hermitian_trace_norm(&diff) / T::from_f64_lossy(2.0))
}

fn canonical_le<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> bool {
    for (x, y) in a.entries().iter().zip(b.entries().iter()) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if p < q {
                return true;
            }
            if p > q {
                return false;
            }
        }
    }
    true
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, in `[0, 1]`, symmetric.
pub fn fidelity<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    check_same_layout(a, b)?;
    let root = psd_sqrt(a.entries());
    let inner = &root * b.entries() * &root;
    // Noise eigenvalues at machine scale would be amplified by the square
    // root; treat anything below the rank cutoff as exactly zero.
    let sum = hermitian_eigenvalues(&inner)
        .into_iter()
        .filter(|v| *v > T::rank_eps())
        .fold(T::zero(), |acc, v| acc + v.sqrt());
    Ok((sum * sum).min(T::one()))
}

/// Binary entropy `h(x) = −x log₂ x − (1−x) log₂(1−x)` with `0 log 0 = 0`.
pub fn binary_entropy<T: Real>(x: T) -> Result<T> {
    if x < T::zero() || x > T::one() {
        return Err(Error::OutOfRange(format!(
            "binary entropy argument {} outside [0, 1]",
            x.to_f64_lossy()
        )));
    }
    let term = |p: T| {
        if p <= T::zero() {
            T::zero()
        } else {
            -p * p.log2()
        }
    };
    Ok(term(x) + term(T::one() - x))
}
