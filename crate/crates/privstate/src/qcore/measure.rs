//! Born-rule measurements and expectation values.

use num_complex::Complex;

use super::density::{base_offsets, ordered_offsets, DensityMatrix};
use super::layout::{Label, SystemLayout};
use super::linalg::CMatrix;
use super::rng::SeedStream;
use super::unitary::Observable;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Result of a sampled projective measurement.
#[derive(Clone, Debug)]
pub struct Measurement<T: Real> {
    /// One index per measured subsystem, in the order they were requested.
    pub outcome: Vec<usize>,
    /// Normalized conditional state on the remaining subsystems.
    pub post_state: DensityMatrix<T>,
    /// Born probability of the sampled branch.
    pub probability: T,
}

/// Transfer matrix `M[s, t] = Σ_rest ρ[(s, rest), (t, rest)]` with
/// target indices ordered as in `targets`. `Tr(ρ (O ⊗ I)) = Tr(M O)`.
fn transfer_matrix<T: Real>(rho: &DensityMatrix<T>, targets: &[Label]) -> Result<CMatrix<T>> {
    let target_base = checked_offsets(rho, targets)?;
    let rest_layout = rho.layout().without(targets)?;
    let rest_base = base_offsets(rho.layout(), &rest_layout);
    let dim_t = target_base.len();
    let mut m = CMatrix::zeros(dim_t, dim_t);
    for s in 0..dim_t {
        for t in 0..dim_t {
            let mut acc = Complex::new(T::zero(), T::zero());
            for &rest in &rest_base {
                acc += rho.entries()[(target_base[s] + rest, target_base[t] + rest)];
            }
            m[(s, t)] = acc;
        }
    }
    Ok(m)
}

fn checked_offsets<T: Real>(rho: &DensityMatrix<T>, targets: &[Label]) -> Result<Vec<usize>> {
    if targets.is_empty() {
        return Err(Error::InvalidConfig("no target subsystems given".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for label in targets {
        rho.layout().dim_of(label)?;
        if !seen.insert(label.clone()) {
            return Err(Error::LabelCollision(label.to_string()));
        }
    }
    Ok(ordered_offsets(rho.layout(), targets))
}

/// Exact computational-basis outcome distribution over `targets`
/// (diagonal marginal), indexed row-major in `targets` order.
pub fn computational_distribution<T: Real>(
    rho: &DensityMatrix<T>,
    targets: &[Label],
) -> Result<Vec<T>> {
    let target_base = checked_offsets(rho, targets)?;
    let rest_layout = rho.layout().without(targets)?;
    let rest_base = base_offsets(rho.layout(), &rest_layout);
    Ok(target_base
        .iter()
        .map(|&base| {
            rest_base
                .iter()
                .fold(T::zero(), |acc, &rest| acc + rho.entries()[(base + rest, base + rest)].re)
        })
        .collect())
}

/// Sample a computational-basis measurement on `targets`.
///
/// The outcome follows the Born distribution of the diagonal marginal; the
/// post state is the normalized conditional state on the remaining
/// subsystems. Repeated calls with the same stream state reproduce the
/// same outcome sequence, and branches of zero probability are never
/// returned.
pub fn measure_computational<T: Real>(
    rho: &DensityMatrix<T>,
    targets: &[Label],
    stream: &mut SeedStream,
) -> Result<Measurement<T>> {
    let probs = computational_distribution(rho, targets)?;
    let probs_f64: Vec<f64> = probs.iter().map(|p| p.to_f64_lossy().max(0.0)).collect();
    let flat = stream.sample_distribution(&probs_f64);
    let probability = probs[flat];

    let target_layout = SystemLayout::new(
        targets
            .iter()
            .map(|l| Ok((l.clone(), rho.layout().dim_of(l)?)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let outcome = target_layout.unravel(flat);

    let target_base = ordered_offsets(rho.layout(), targets);
    let rest_layout = rho.layout().without(targets)?;
    let rest_base = base_offsets(rho.layout(), &rest_layout);
    let offset = target_base[flat];
    let rest_dim = rest_base.len();
    let mut entries = CMatrix::zeros(rest_dim, rest_dim);
    let norm = Complex::new(probability, T::zero());
    for (col, &cb) in rest_base.iter().enumerate() {
        for (row, &rb) in rest_base.iter().enumerate() {
            entries[(row, col)] = rho.entries()[(offset + rb, offset + cb)] / norm;
        }
    }
    Ok(Measurement {
        outcome,
        post_state: DensityMatrix::from_valid_parts(rest_layout, entries),
        probability,
    })
}

/// `Tr(ρ · (O ⊗ I))` with the observable embedded on `targets`
/// (in the given order). Errors if the imaginary part survives tolerance.
pub fn expectation<T: Real>(
    rho: &DensityMatrix<T>,
    obs: &Observable<T>,
    targets: &[Label],
) -> Result<T> {
    let dims = obs.dims();
    if dims.len() != targets.len() {
        return Err(Error::DimensionMismatch(
            "one target label per observable factor required".into(),
        ));
    }
    for (label, want) in targets.iter().zip(&dims) {
        if rho.layout().dim_of(label)? != *want {
            return Err(Error::DimensionMismatch(format!(
                "target {label} does not match observable dimension {want}"
            )));
        }
    }
    let m = transfer_matrix(rho, targets)?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for s in 0..m.nrows() {
        for t in 0..m.ncols() {
            acc += m[(s, t)] * obs.entries()[(t, s)];
        }
    }
    if acc.im.abs() > T::validity_eps() {
        return Err(Error::NotHermitian {
            deviation: acc.im.abs().to_f64_lossy(),
        });
    }
    Ok(acc.re)
}

/// Sample a projective measurement given a complete projector family on
/// `targets`. Returns the branch index, the projected (normalized) state on
/// the full layout, and the branch probability.
pub fn measure_projectors<T: Real>(
    rho: &DensityMatrix<T>,
    projectors: &[CMatrix<T>],
    targets: &[Label],
    stream: &mut SeedStream,
) -> Result<(usize, DensityMatrix<T>, T)> {
    let m = transfer_matrix(rho, targets)?;
    let dims: Vec<usize> = targets
        .iter()
        .map(|l| rho.layout().dim_of(l))
        .collect::<Result<Vec<_>>>()?;
    let dim_t: usize = dims.iter().product();
    let mut probs = Vec::with_capacity(projectors.len());
    for p in projectors {
        if p.nrows() != dim_t {
            return Err(Error::DimensionMismatch(
                "projector does not match target dimension".into(),
            ));
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for s in 0..dim_t {
            for t in 0..dim_t {
                acc += m[(s, t)] * p[(t, s)];
            }
        }
        probs.push(acc.re.max(T::zero()));
    }
    let probs_f64: Vec<f64> = probs.iter().map(|p| p.to_f64_lossy()).collect();
    let branch = stream.sample_distribution(&probs_f64);
    let probability = probs[branch];

    let projected = rho.conjugate_on(&projectors[branch], &dims, targets)?;
    let entries = projected / Complex::new(probability, T::zero());
    Ok((
        branch,
        DensityMatrix::from_valid_parts(rho.layout().clone(), entries),
        probability,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::layout::labels;
    use crate::qcore::linalg::{kron, pauli_x, pauli_z};
    use crate::qcore::random::random_density;
    use crate::scalar::re;
    use nalgebra::DVector;

    fn two_qubits() -> SystemLayout {
        SystemLayout::of(&[("A", 2), ("B", 2)])
    }

    fn ebit() -> DensityMatrix<f64> {
        let mut psi = DVector::zeros(4);
        psi[0] = re(1.0);
        psi[3] = re(1.0);
        DensityMatrix::pure(two_qubits(), &psi).unwrap()
    }

    fn psi_minus() -> DensityMatrix<f64> {
        let mut psi = DVector::zeros(4);
        psi[0] = re(1.0);
        psi[3] = re(-1.0);
        DensityMatrix::pure(two_qubits(), &psi).unwrap()
    }

    #[test]
    fn basis_state_measures_deterministically() {
        let rho = DensityMatrix::<f64>::basis_state(two_qubits(), &[0, 1]).unwrap();
        let mut stream = SeedStream::root(1);
        let m = measure_computational(&rho, &[labels::key_a(), labels::key_b()], &mut stream)
            .unwrap();
        assert_eq!(m.outcome, vec![0, 1]);
        assert!((m.probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ebit_outcomes_are_perfectly_correlated() {
        let rho = ebit();
        let mut stream = SeedStream::root(2);
        for _ in 0..200 {
            let m = measure_computational(&rho, &[labels::key_a(), labels::key_b()], &mut stream)
                .unwrap();
            assert_eq!(m.outcome[0], m.outcome[1]);
            assert!((m.probability - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_is_seed_reproducible() {
        let mut stream_a = SeedStream::root(3);
        let mut stream_b = SeedStream::root(3);
        let rho = random_density::<f64>(two_qubits(), &mut SeedStream::root(9));
        for _ in 0..50 {
            let a = measure_computational(&rho, &[labels::key_a()], &mut stream_a).unwrap();
            let b = measure_computational(&rho, &[labels::key_a()], &mut stream_b).unwrap();
            assert_eq!(a.outcome, b.outcome);
        }
    }

    #[test]
    fn pauli_expectations_on_bell_states() {
        let zz = Observable::new(two_qubits(), kron(&pauli_z(), &pauli_z())).unwrap();
        let xx = Observable::new(two_qubits(), kron(&pauli_x(), &pauli_x())).unwrap();
        let targets = [labels::key_a(), labels::key_b()];
        assert!((expectation(&ebit(), &zz, &targets).unwrap() - 1.0).abs() < 1e-12);
        assert!((expectation(&ebit(), &xx, &targets).unwrap() - 1.0).abs() < 1e-12);
        assert!((expectation(&psi_minus(), &xx, &targets).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_observable_is_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(0.0), re(0.0)]);
        assert!(Observable::<f64>::new(SystemLayout::of(&[("A", 2)]), m).is_err());
    }

    #[test]
    fn projector_measurement_conditions_the_state() {
        // Measuring A of an ebit in the computational basis via projectors
        // leaves B in the matching basis state.
        let rho = ebit();
        let p0 = CMatrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(0.0)]);
        let p1 = CMatrix::from_row_slice(2, 2, &[re(0.0), re(0.0), re(0.0), re(1.0)]);
        let mut stream = SeedStream::root(4);
        let (branch, post, prob) =
            measure_projectors(&rho, &[p0, p1], &[labels::key_a()], &mut stream).unwrap();
        assert!((prob - 0.5).abs() < 1e-12);
        let b_state = post.partial_trace(&[labels::key_b()]).unwrap();
        assert!((b_state.entries()[(branch, branch)].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn empirical_frequencies_match_born_distribution() {
        let rho = random_density::<f64>(two_qubits(), &mut SeedStream::root(21));
        let targets = [labels::key_a(), labels::key_b()];
        let exact = computational_distribution(&rho, &targets).unwrap();
        let mut counts = [0usize; 4];
        let trials = 100_000;
        let mut stream = SeedStream::root(22);
        for _ in 0..trials {
            let m = measure_computational(&rho, &targets, &mut stream).unwrap();
            counts[m.outcome[0] * 2 + m.outcome[1]] += 1;
        }
        for (count, p) in counts.iter().zip(&exact) {
            let mean = p * trials as f64;
            let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
            assert!(
                ((*count as f64) - mean).abs() <= 3.0 * sigma + 1.0,
                "count {count} outside 3σ of {mean}"
            );
        }
    }
}
