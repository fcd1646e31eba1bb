//! Dense complex matrix helpers shared by the quantum primitives.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use crate::scalar::{cpx, re, Real};

/// Dense complex matrix over the generic scalar.
pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type CVector<T> = nalgebra::DVector<Complex<T>>;

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

pub fn dagger<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.adjoint()
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

/// Largest entrywise deviation from hermiticity, `max |M − M†|`.
pub fn hermiticity_deviation<T: Real>(m: &CMatrix<T>) -> T {
    let mut max = T::zero();
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).modulus();
            if d > max {
                max = d;
            }
        }
    }
    max
}

/// Largest entrywise deviation of `U U†` from the identity.
pub fn unitarity_deviation<T: Real>(m: &CMatrix<T>) -> T {
    let product = m * m.adjoint();
    let mut max = T::zero();
    for i in 0..product.nrows() {
        for j in 0..product.ncols() {
            let expected = if i == j {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            };
            let d = (product[(i, j)] - expected).modulus();
            if d > max {
                max = d;
            }
        }
    }
    max
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Complex<T> {
    m.trace()
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    debug_assert_eq!(a.shape(), b.shape());
    let mut max = T::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        let d = (x - y).modulus();
        if d > max {
            max = d;
        }
    }
    max
}

pub fn pauli_x<T: Real>() -> CMatrix<T> {
    CMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)])
}

pub fn pauli_y<T: Real>() -> CMatrix<T> {
    CMatrix::from_row_slice(2, 2, &[re(0.0), cpx(0.0, -1.0), cpx(0.0, 1.0), re(0.0)])
}

pub fn pauli_z<T: Real>() -> CMatrix<T> {
    CMatrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)])
}

/// Discrete Fourier transform on `d` levels, `F[x, i] = ω^{xi} / √d`.
///
/// For `d = 2` this is the Hadamard gate.
pub fn fourier<T: Real>(d: usize) -> CMatrix<T> {
    let norm = 1.0 / (d as f64).sqrt();
    CMatrix::from_fn(d, d, |x, i| {
        let angle = 2.0 * std::f64::consts::PI * (x * i) as f64 / d as f64;
        cpx(norm * angle.cos(), norm * angle.sin())
    })
}

/// Swap operator on two `d`-dimensional subsystems, `V |ij⟩ = |ji⟩`.
pub fn swap<T: Real>(d: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(j * d + i, i * d + j)] = Complex::new(T::one(), T::zero());
        }
    }
    m
}

/// Generalized Pauli shift `X |i⟩ = |i+1 mod d⟩`.
pub fn shift<T: Real>(d: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[((i + 1) % d, i)] = Complex::new(T::one(), T::zero());
    }
    m
}

/// Generalized Pauli clock `Z |i⟩ = ω^i |i⟩`.
pub fn clock<T: Real>(d: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        let angle = 2.0 * std::f64::consts::PI * i as f64 / d as f64;
        m[(i, i)] = cpx(angle.cos(), angle.sin());
    }
    m
}
