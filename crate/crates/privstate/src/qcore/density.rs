//! Density matrices over labeled multipartite systems.

use num_complex::Complex;

use super::eigen::{hermitian_eigen, reassemble};
use super::layout::{Label, SystemLayout};
use super::linalg::{hermiticity_deviation, CMatrix, CVector};
use super::unitary::UnitaryOp;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Hermitian, unit-trace, positive-semidefinite operator over a labeled
/// tensor factorization. The carrier of every quantum state in the crate.
///
/// Construction through [`DensityMatrix::new`] enforces the invariants:
/// hermiticity and unit trace within `T::validity_eps()`, and positive
/// semidefiniteness down to `-10 · validity_eps` (for `f64`: `1e-10` and
/// `-1e-9`). Eigenvalues in the tolerated negative band are clipped to zero
/// and the state renormalized; clipping more than `1e4 · validity_eps`
/// of total mass is an error rather than silent repair.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    layout: SystemLayout,
    entries: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(layout: SystemLayout, entries: CMatrix<T>) -> Result<Self> {
        if entries.nrows() != layout.dim() || entries.ncols() != layout.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, layout dimension is {}",
                entries.nrows(),
                entries.ncols(),
                layout.dim()
            )));
        }
        let herm = hermiticity_deviation(&entries);
        if herm > T::validity_eps() {
            return Err(Error::NotHermitian {
                deviation: herm.to_f64_lossy(),
            });
        }
        let trace = entries.trace();
        if (trace.re - T::one()).abs() > T::validity_eps() {
            return Err(Error::TraceNotOne {
                trace: trace.re.to_f64_lossy(),
            });
        }

        let (values, vectors) = hermitian_eigen(&entries);
        let psd_floor = -T::validity_eps() * T::from_f64_lossy(10.0);
        let min = values[0];
        if min < psd_floor {
            return Err(Error::NotPositive {
                min_eigenvalue: min.to_f64_lossy(),
            });
        }
        if min < T::zero() {
            let clipped = values
                .iter()
                .filter(|v| **v < T::zero())
                .fold(T::zero(), |acc, v| acc - *v);
            if clipped > T::validity_eps() * T::from_f64_lossy(1e4) {
                return Err(Error::ClipBudgetExceeded {
                    clipped: clipped.to_f64_lossy(),
                });
            }
            let positive: Vec<T> = values.iter().map(|v| v.max(T::zero())).collect();
            let total = positive.iter().fold(T::zero(), |acc, v| acc + *v);
            let renormalized: Vec<T> = positive.iter().map(|v| *v / total).collect();
            let entries = reassemble(&vectors, &renormalized);
            return Ok(DensityMatrix { layout, entries });
        }
        Ok(DensityMatrix { layout, entries })
    }

    /// Constructor for internal operations that preserve validity
    /// (tensoring, partial trace, unitary conjugation, Kraus maps,
    /// normalized projections). Skips the eigenvalue pass.
    pub(crate) fn from_valid_parts(layout: SystemLayout, entries: CMatrix<T>) -> Self {
        debug_assert_eq!(entries.nrows(), layout.dim());
        debug_assert!(
            hermiticity_deviation(&entries).to_f64_lossy() < 1e-7,
            "internal state lost hermiticity"
        );
        DensityMatrix { layout, entries }
    }

    /// Pure state `|ψ⟩⟨ψ|` from an amplitude vector (normalized here).
    pub fn pure(layout: SystemLayout, amplitudes: &CVector<T>) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for layout dimension {}",
                amplitudes.len(),
                layout.dim()
            )));
        }
        let norm = amplitudes.norm();
        if norm == T::zero() {
            return Err(Error::OutOfRange("zero state vector".into()));
        }
        let psi = amplitudes / Complex::new(norm, T::zero());
        let entries = &psi * psi.adjoint();
        Ok(DensityMatrix { layout, entries })
    }

    /// Computational basis state `|i₁ i₂ …⟩⟨i₁ i₂ …|`.
    pub fn basis_state(layout: SystemLayout, indices: &[usize]) -> Result<Self> {
        if indices.len() != layout.len() {
            return Err(Error::DimensionMismatch(
                "one index per subsystem required".into(),
            ));
        }
        let flat = layout.ravel(indices);
        let mut amplitudes = CVector::zeros(layout.dim());
        amplitudes[flat] = Complex::new(T::one(), T::zero());
        Self::pure(layout, &amplitudes)
    }

    /// `I / dim` on the given layout.
    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let dim = layout.dim();
        let entries =
            CMatrix::identity(dim, dim) / Complex::new(T::from_f64_lossy(dim as f64), T::zero());
        DensityMatrix { layout, entries }
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

    /// Real parts of the diagonal (the computational-basis distribution).
    pub fn diagonal_real(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// Full invariant check at the type tolerances, for tests and audits.
    pub fn validate(&self) -> Result<()> {
        let copy = self.clone();
        DensityMatrix::new(copy.layout, copy.entries).map(|_| ())
    }

    /// Kronecker product; layouts are concatenated.
    pub fn tensor(&self, other: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let layout = self.layout.concat(&other.layout)?;
        let entries = self.entries.kronecker(&other.entries);
        Ok(DensityMatrix { layout, entries })
    }

    /// Reduced state on `keep` (in this layout's order); trace preserved.
    pub fn partial_trace(&self, keep: &[Label]) -> Result<DensityMatrix<T>> {
        let kept_layout = self.layout.restricted_to(keep)?;
        let traced_layout = self.layout.without(keep)?;
        let keep_base = base_offsets(&self.layout, &kept_layout);
        let rest_base = base_offsets(&self.layout, &traced_layout);
        let out_dim = kept_layout.dim();
        let mut entries = CMatrix::zeros(out_dim, out_dim);
        for col in 0..out_dim {
            for row in 0..out_dim {
                let mut acc = Complex::new(T::zero(), T::zero());
                for &t in &rest_base {
                    acc += self.entries[(keep_base[row] + t, keep_base[col] + t)];
                }
                entries[(row, col)] = acc;
            }
        }
        Ok(DensityMatrix {
            layout: kept_layout,
            entries,
        })
    }

    /// `(U ⊗ I) ρ (U ⊗ I)†` with `U` embedded on `targets`.
    ///
    /// `targets` fixes the subsystem order `U`'s indices refer to; the i-th
    /// target must have the dimension of `U`'s i-th subsystem.
    pub fn apply_unitary(&self, u: &UnitaryOp<T>, targets: &[Label]) -> Result<DensityMatrix<T>> {
        let conjugated = self.conjugate_on(u.entries(), &u.dims(), targets)?;
        Ok(DensityMatrix {
            layout: self.layout.clone(),
            entries: conjugated,
        })
    }

    /// `(M ⊗ I) ρ (M ⊗ I)†` for an arbitrary operator block `M` on
    /// `targets`; shared by unitary conjugation and Kraus terms. Does not
    /// renormalize.
    pub(crate) fn conjugate_on(
        &self,
        block: &CMatrix<T>,
        block_dims: &[usize],
        targets: &[Label],
    ) -> Result<CMatrix<T>> {
        if targets.len() != block_dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "operator factors {} vs {} target labels",
                block_dims.len(),
                targets.len()
            )));
        }
        for (label, want) in targets.iter().zip(block_dims) {
            let have = self.layout.dim_of(label)?;
            if have != *want {
                return Err(Error::DimensionMismatch(format!(
                    "target {label} has dimension {have}, operator factor wants {want}"
                )));
            }
        }
        let target_base = ordered_offsets(&self.layout, targets);
        let rest_layout = self.layout.without(targets)?;
        let rest_base = base_offsets(&self.layout, &rest_layout);
        let dim = self.dim();
        let dim_t = block.nrows();

        // left multiply: tmp[(s, rest), c] = Σ_t M[s, t] ρ[(t, rest), c]
        let mut tmp = CMatrix::zeros(dim, dim);
        for c in 0..dim {
            for &rest in &rest_base {
                for s in 0..dim_t {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for t in 0..dim_t {
                        acc += block[(s, t)] * self.entries[(target_base[t] + rest, c)];
                    }
                    tmp[(target_base[s] + rest, c)] = acc;
                }
            }
        }
        // right multiply by M†: out[r, (s, rest)] = Σ_t tmp[r, (t, rest)] conj(M[s, t])
        let mut out = CMatrix::zeros(dim, dim);
        for &rest in &rest_base {
            for s in 0..dim_t {
                for t in 0..dim_t {
                    let factor = block[(s, t)].conj();
                    if factor.re == T::zero() && factor.im == T::zero() {
                        continue;
                    }
                    let src = target_base[t] + rest;
                    let dst = target_base[s] + rest;
                    for r in 0..dim {
                        out[(r, dst)] += tmp[(r, src)] * factor;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Pure state on `self ⊗ E` whose reduction over `E` is `self`.
    ///
    /// The purifying dimension is the rank of the state; eigenvalues below
    /// `T::rank_eps()` are truncated.
    pub fn purify(&self, eve: Label) -> Result<DensityMatrix<T>> {
        let (values, vectors) = hermitian_eigen(&self.entries);
        let kept: Vec<(T, usize)> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > T::rank_eps())
            .map(|(i, v)| (*v, i))
            .collect();
        let rank = kept.len().max(1);
        let eve_layout = SystemLayout::new(vec![(eve, rank)])?;
        let layout = self.layout.concat(&eve_layout)?;
        let mut amplitudes = CVector::zeros(layout.dim());
        for (k, (value, col)) in kept.iter().enumerate() {
            let weight = Complex::new(value.sqrt(), T::zero());
            for i in 0..self.dim() {
                amplitudes[i * rank + k] = weight * vectors[(i, *col)];
            }
        }
        DensityMatrix::pure(layout, &amplitudes)
    }

    /// Same state with subsystems renamed.
    pub fn relabeled(&self, map: &[(Label, Label)]) -> Result<DensityMatrix<T>> {
        Ok(DensityMatrix {
            layout: self.layout.relabeled(map)?,
            entries: self.entries.clone(),
        })
    }

    /// Clip the tolerated negative eigenvalue band and renormalize;
    /// for states emerging from long noisy arithmetic chains.
    pub fn sanitized(self) -> Result<DensityMatrix<T>> {
        DensityMatrix::new(self.layout, self.entries)
    }
}

/// Flat-index contributions of a sub-layout's multi-indices, using the
/// parent layout's strides. Enumerated row-major in sub-layout order.
pub(crate) fn base_offsets(parent: &SystemLayout, sub: &SystemLayout) -> Vec<usize> {
    let strides = parent.strides();
    let positions: Vec<usize> = sub
        .labels()
        .map(|l| parent.position(l).expect("sub-layout label in parent"))
        .collect();
    let dims: Vec<usize> = sub.subsystems().iter().map(|(_, d)| *d).collect();
    let mut offsets = vec![0usize];
    for (pos, dim) in positions.iter().zip(&dims) {
        let stride = strides[*pos];
        let mut next = Vec::with_capacity(offsets.len() * dim);
        for base in &offsets {
            for i in 0..*dim {
                next.push(base + i * stride);
            }
        }
        offsets = next;
    }
    offsets
}

/// Like [`base_offsets`] but with the subsystem order given by `labels`
/// (the order an embedded operator's indices refer to).
pub(crate) fn ordered_offsets(parent: &SystemLayout, labels: &[Label]) -> Vec<usize> {
    let strides = parent.strides();
    let mut offsets = vec![0usize];
    for label in labels {
        let pos = parent.position(label).expect("target label in layout");
        let dim = parent.subsystems()[pos].1;
        let stride = strides[pos];
        let mut next = Vec::with_capacity(offsets.len() * dim);
        for base in &offsets {
            for i in 0..dim {
                next.push(base + i * stride);
            }
        }
        offsets = next;
    }
    offsets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::layout::labels;
    use crate::qcore::linalg::{identity, max_abs_diff};
    use crate::qcore::random::{random_density, random_unitary};
    use crate::qcore::rng::SeedStream;
    use crate::scalar::re;

    fn qubit(label: &str) -> SystemLayout {
        SystemLayout::of(&[(label, 2)])
    }

    fn ebit() -> DensityMatrix<f64> {
        let layout = SystemLayout::of(&[("A", 2), ("B", 2)]);
        let mut psi = CVector::zeros(4);
        psi[0] = re(1.0);
        psi[3] = re(1.0);
        DensityMatrix::pure(layout, &psi).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = DensityMatrix::<f64>::basis_state(qubit("A"), &[0]).unwrap();
        let one = DensityMatrix::<f64>::basis_state(qubit("B"), &[1]).unwrap();
        let product = zero.tensor(&one).unwrap();
        let expected =
            DensityMatrix::<f64>::basis_state(SystemLayout::of(&[("A", 2), ("B", 2)]), &[0, 1])
                .unwrap();
        assert!(max_abs_diff(product.entries(), expected.entries()) < 1e-15);
    }

    #[test]
    fn tensor_of_maximally_mixed_is_maximally_mixed() {
        let a = DensityMatrix::<f64>::maximally_mixed(qubit("A"));
        let b = DensityMatrix::<f64>::maximally_mixed(qubit("B"));
        let product = a.tensor(&b).unwrap();
        for i in 0..4 {
            assert!((product.entries()[(i, i)].re - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn tensor_rejects_label_collision() {
        let a = DensityMatrix::<f64>::maximally_mixed(qubit("A"));
        assert!(a.tensor(&a).is_err());
    }

    #[test]
    fn tensor_preserves_trace() {
        let mut stream = SeedStream::root(5);
        let rho = random_density::<f64>(qubit("X"), &mut stream);
        let ebit = ebit();
        let product = ebit.tensor(&rho).unwrap();
        assert!((product.entries().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_entangled_marginal_is_maximally_mixed() {
        let reduced = ebit().partial_trace(&[labels::key_a()]).unwrap();
        assert!(max_abs_diff(reduced.entries(), &(identity(2) / re(2.0))) < 1e-12);
    }

    #[test]
    fn product_state_marginal_recovers_factor() {
        let mut stream = SeedStream::root(7);
        let rho = random_density::<f64>(qubit("A"), &mut stream);
        let sigma = random_density::<f64>(SystemLayout::of(&[("B", 3)]), &mut stream);
        let product = rho.tensor(&sigma).unwrap();
        let back = product.partial_trace(&[Label::from("A")]).unwrap();
        assert!(max_abs_diff(back.entries(), rho.entries()) < 1e-12);
    }

    #[test]
    fn partial_trace_unknown_label_errors() {
        assert!(ebit().partial_trace(&[Label::from("Z")]).is_err());
    }

    #[test]
    fn identity_preserves_state_and_double_apply_reverses() {
        let mut stream = SeedStream::root(11);
        let layout = SystemLayout::of(&[("A", 2), ("B", 2), ("C", 2)]);
        let rho = random_density::<f64>(layout, &mut stream);
        let id = UnitaryOp::new(SystemLayout::of(&[("B", 2)]), identity(2)).unwrap();
        let same = rho.apply_unitary(&id, &[Label::from("B")]).unwrap();
        assert!(max_abs_diff(same.entries(), rho.entries()) < 1e-14);

        let u = random_unitary::<f64>(SystemLayout::of(&[("B", 2), ("C", 2)]), &mut stream);
        let forward = rho
            .apply_unitary(&u, &[Label::from("B"), Label::from("C")])
            .unwrap();
        let back = forward
            .apply_unitary(&u.adjoint(), &[Label::from("B"), Label::from("C")])
            .unwrap();
        assert!(max_abs_diff(back.entries(), rho.entries()) < 1e-12);
    }

    #[test]
    fn unitary_conjugation_preserves_spectrum() {
        use crate::qcore::eigen::hermitian_eigenvalues;
        let mut stream = SeedStream::root(13);
        let layout = SystemLayout::of(&[("A", 2), ("B", 2), ("C", 2)]);
        let rho = random_density::<f64>(layout.clone(), &mut stream);
        let u = random_unitary::<f64>(layout, &mut stream);
        let rotated = rho
            .apply_unitary(&u, &[Label::from("A"), Label::from("B"), Label::from("C")])
            .unwrap();
        let before = hermitian_eigenvalues(rho.entries());
        let after = hermitian_eigenvalues(rotated.entries());
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn apply_unitary_dimension_mismatch_errors() {
        let rho = ebit();
        let u = UnitaryOp::new(SystemLayout::of(&[("X", 3)]), identity(3)).unwrap();
        assert!(rho.apply_unitary(&u, &[Label::from("A")]).is_err());
    }

    #[test]
    fn purify_of_pure_state_has_unit_eve() {
        let rho = ebit();
        let purified = rho.purify(labels::eve()).unwrap();
        assert_eq!(purified.layout().dim_of(&labels::eve()).unwrap(), 1);
        let back = purified
            .partial_trace(&[labels::key_a(), labels::key_b()])
            .unwrap();
        assert!(max_abs_diff(back.entries(), rho.entries()) < 1e-12);
    }

    #[test]
    fn purify_of_maximally_mixed_qubit_is_entangled_pair() {
        let rho = DensityMatrix::<f64>::maximally_mixed(qubit("A"));
        let purified = rho.purify(labels::eve()).unwrap();
        assert_eq!(purified.dim(), 4);
        let eve_side = purified.partial_trace(&[labels::eve()]).unwrap();
        assert!(max_abs_diff(eve_side.entries(), &(identity(2) / re(2.0))) < 1e-12);
    }

    #[test]
    fn purify_round_trip_on_random_state() {
        let mut stream = SeedStream::root(17);
        let layout = SystemLayout::of(&[("A", 2), ("B", 2)]);
        let rho = random_density::<f64>(layout, &mut stream);
        let purified = rho.purify(labels::eve()).unwrap();
        let back = purified
            .partial_trace(&[labels::key_a(), labels::key_b()])
            .unwrap();
        assert!(max_abs_diff(back.entries(), rho.entries()) < 1e-10);
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        let layout = qubit("A");
        let not_hermitian = CMatrix::from_row_slice(2, 2, &[re(0.5), re(0.3), re(0.0), re(0.5)]);
        assert!(matches!(
            DensityMatrix::<f64>::new(layout.clone(), not_hermitian),
            Err(Error::NotHermitian { .. })
        ));

        let bad_trace = CMatrix::from_row_slice(2, 2, &[re(0.7), re(0.0), re(0.0), re(0.7)]);
        assert!(matches!(
            DensityMatrix::<f64>::new(layout.clone(), bad_trace),
            Err(Error::TraceNotOne { .. })
        ));

        let not_psd = CMatrix::from_row_slice(2, 2, &[re(1.1), re(0.0), re(0.0), re(-0.1)]);
        assert!(matches!(
            DensityMatrix::<f64>::new(layout, not_psd),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn construction_clips_tolerated_negative_band() {
        let layout = qubit("A");
        let slightly_negative =
            CMatrix::from_row_slice(2, 2, &[re(1.0 + 2e-10), re(0.0), re(0.0), re(-2e-10)]);
        let state = DensityMatrix::<f64>::new(layout, slightly_negative).unwrap();
        assert!(state.entries()[(1, 1)].re >= 0.0);
        assert!((state.entries().trace().re - 1.0).abs() < 1e-12);
    }
}
