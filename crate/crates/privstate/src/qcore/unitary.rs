//! Unitary operators and Hermitian observables on labeled subsystems.

use super::layout::SystemLayout;
use super::linalg::{hermiticity_deviation, unitarity_deviation, CMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unitary acting on the subsystems named by its layout.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOp<T: Real> {
    layout: SystemLayout,
    entries: CMatrix<T>,
}

impl<T: Real> UnitaryOp<T> {
    /// Validates `U U† = I` within `T::validity_eps()`.
    pub fn new(layout: SystemLayout, entries: CMatrix<T>) -> Result<Self> {
        if entries.nrows() != layout.dim() || entries.ncols() != layout.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, layout dimension is {}",
                entries.nrows(),
                entries.ncols(),
                layout.dim()
            )));
        }
        let deviation = unitarity_deviation(&entries);
        if deviation > T::validity_eps() {
            return Err(Error::NotUnitary {
                deviation: deviation.to_f64_lossy(),
            });
        }
        Ok(UnitaryOp { layout, entries })
    }

    /// For operators assembled from already-validated unitary blocks
    /// (block-diagonal controlled forms); skips the `U U†` product.
    pub(crate) fn from_valid_parts(layout: SystemLayout, entries: CMatrix<T>) -> Self {
        debug_assert_eq!(entries.nrows(), layout.dim());
        UnitaryOp { layout, entries }
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let dim = layout.dim();
        UnitaryOp {
            layout,
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// Dimensions of the operator's subsystems, in layout order.
    pub fn dims(&self) -> Vec<usize> {
        self.layout.subsystems().iter().map(|(_, d)| *d).collect()
    }

    pub fn adjoint(&self) -> UnitaryOp<T> {
        UnitaryOp {
            layout: self.layout.clone(),
            entries: self.entries.adjoint(),
        }
    }
}

/// Hermitian observable on labeled subsystems.
#[derive(Clone, Debug)]
pub struct Observable<T: Real> {
    layout: SystemLayout,
    entries: CMatrix<T>,
}

impl<T: Real> Observable<T> {
    /// Validates hermiticity within `T::validity_eps()`.
    pub fn new(layout: SystemLayout, entries: CMatrix<T>) -> Result<Self> {
        if entries.nrows() != layout.dim() || entries.ncols() != layout.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, layout dimension is {}",
                entries.nrows(),
                entries.ncols(),
                layout.dim()
            )));
        }
        let deviation = hermiticity_deviation(&entries);
        if deviation > T::validity_eps() {
            return Err(Error::NotHermitian {
                deviation: deviation.to_f64_lossy(),
            });
        }
        Ok(Observable { layout, entries })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn entries(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn dims(&self) -> Vec<usize> {
        self.layout.subsystems().iter().map(|(_, d)| *d).collect()
    }
}
