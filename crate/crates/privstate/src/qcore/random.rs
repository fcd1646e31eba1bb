//! Haar-random unitaries and random density matrices for tests, property
//! suites and generated private-state instances.

use nalgebra::ComplexField;
use num_complex::Complex;

use super::layout::SystemLayout;
use super::linalg::CMatrix;
use super::density::DensityMatrix;
use super::rng::SeedStream;
use super::unitary::UnitaryOp;
use crate::scalar::Real;

fn ginibre<T: Real>(n: usize, stream: &mut SeedStream) -> CMatrix<T> {
    CMatrix::from_fn(n, n, |_, _| {
        Complex::new(
            T::from_f64_lossy(stream.normal()),
            T::from_f64_lossy(stream.normal()),
        )
    })
}

/// Haar-distributed unitary on the given layout (QR of a Ginibre matrix
/// with the phase convention fixed by R's diagonal).
pub fn random_unitary<T: Real>(layout: SystemLayout, stream: &mut SeedStream) -> UnitaryOp<T> {
    let n = layout.dim();
    let qr = ginibre::<T>(n, stream).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.modulus() > T::zero() {
            d / Complex::new(d.modulus(), T::zero())
        } else {
            Complex::new(T::one(), T::zero())
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    UnitaryOp::new(layout, q).expect("QR of Ginibre matrix is unitary")
}

/// Random full-rank density matrix from the Hilbert-Schmidt ensemble,
/// `G G† / Tr(G G†)`.
pub fn random_density<T: Real>(layout: SystemLayout, stream: &mut SeedStream) -> DensityMatrix<T> {
    let n = layout.dim();
    let g = ginibre::<T>(n, stream);
    let mut m = &g * g.adjoint();
    let trace = m.trace().re;
    m /= Complex::new(trace, T::zero());
    DensityMatrix::new(layout, m).expect("normalized Gram matrix is a state")
}

/// Random pure-state density matrix.
pub fn random_pure<T: Real>(layout: SystemLayout, stream: &mut SeedStream) -> DensityMatrix<T> {
    let n = layout.dim();
    let psi = nalgebra::DVector::from_fn(n, |_, _| {
        Complex::new(
            T::from_f64_lossy(stream.normal()),
            T::from_f64_lossy(stream.normal()),
        )
    });
    DensityMatrix::pure(layout, &psi).expect("random amplitudes normalize")
}
