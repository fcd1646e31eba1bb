//! Hermitian eigendecomposition wrappers.

use num_complex::Complex;

use super::linalg::{CMatrix, CVector};
use crate::scalar::Real;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut values: Vec<T> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    values
}

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian
/// matrix.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let decomp = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomp.eigenvalues[a]
            .partial_cmp(&decomp.eigenvalues[b])
            .expect("eigenvalues are finite")
    });
    let values: Vec<T> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &decomp.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Sum of the absolute eigenvalues of a Hermitian matrix (its trace norm).
pub fn hermitian_trace_norm<T: Real>(m: &CMatrix<T>) -> T {
    hermitian_eigenvalues(m)
        .into_iter()
        .fold(T::zero(), |acc, v| acc + v.abs())
}

/// Hermitian square root of a PSD matrix; small negative eigenvalues are
/// treated as zero.
pub fn psd_sqrt<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let (values, vectors) = hermitian_eigen(m);
    reassemble(&vectors, &values.iter().map(|v| v.max(T::zero()).sqrt()).collect::<Vec<_>>())
}

/// Rebuild `V diag(values) V†` from eigenvector columns.
pub fn reassemble<T: Real>(vectors: &CMatrix<T>, values: &[T]) -> CMatrix<T> {
    let n = vectors.nrows();
    debug_assert_eq!(values.len(), n);
    let mut scaled = vectors.clone();
    for (mut col, &v) in scaled.column_iter_mut().zip(values.iter()) {
        col *= Complex::new(v, T::zero());
    }
    scaled * vectors.adjoint()
}

/// Column `i` of `m` as an owned vector.
pub fn column<T: Real>(m: &CMatrix<T>, i: usize) -> CVector<T> {
    m.column(i).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::{kron, max_abs_diff, pauli_x, pauli_z};

    #[test]
    fn eigen_reconstructs_hermitian_matrix() {
        let m: CMatrix<f64> = kron(&pauli_x(), &pauli_z()) + kron(&pauli_z(), &pauli_x());
        let (values, vectors) = hermitian_eigen(&m);
        let rebuilt = reassemble(&vectors, &values);
        assert!(max_abs_diff(&m, &rebuilt) < 1e-12);
    }

    #[test]
    fn trace_norm_of_pauli_tensor() {
        // X ⊗ Z has eigenvalues ±1, each twice.
        let m: CMatrix<f64> = kron(&pauli_x(), &pauli_z());
        assert!((hermitian_trace_norm(&m) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let m: CMatrix<f64> = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(2.0, 0.0),
                Complex::new(0.5, 0.5),
                Complex::new(0.5, -0.5),
                Complex::new(1.0, 0.0),
            ],
        );
        let root = psd_sqrt(&m);
        assert!(max_abs_diff(&(&root * &root), &m) < 1e-12);
    }
}
