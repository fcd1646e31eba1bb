//! Entanglement and key quantities: log-negativity (an additive upper
//! bound on distillable entanglement), the closed-form bound for the
//! swap-twisted example family, one-way key-rate bounds, and a security
//! diagnostic for extracted key correlations.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pdit::CcqState;
use crate::qcore::density::{base_offsets, DensityMatrix};
use crate::qcore::dist::binary_entropy;
use crate::qcore::eigen::hermitian_trace_norm;
use crate::qcore::layout::Label;
use crate::qcore::linalg::CMatrix;
use crate::scalar::Real;

/// Partial transpose of `rho` over the subsystems in `transposed`
/// (a raw Hermitian matrix, generally not a state).
pub fn partial_transpose<T: Real>(
    rho: &DensityMatrix<T>,
    transposed: &[Label],
) -> Result<CMatrix<T>> {
    let layout = rho.layout();
    let kept_layout = layout.without(transposed)?;
    let transposed_layout = layout.restricted_to(transposed)?;
    let keep_base = base_offsets(layout, &kept_layout);
    let swap_base = base_offsets(layout, &transposed_layout);
    let dim = layout.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for &kc in &keep_base {
        for &kr in &keep_base {
            for &tc in &swap_base {
                for &tr in &swap_base {
                    // transpose the `transposed` factor: swap its row and
                    // column components
                    out[(kr + tr, kc + tc)] = rho.entries()[(kr + tc, kc + tr)];
                }
            }
        }
    }
    Ok(out)
}

/// Log-negativity across a bipartition: `log₂ ‖ρ^{T_side}‖_tr`, where
/// `side` is one side of the cut (the labels to transpose). Zero for PPT
/// states, positive when the partial transpose has negative eigenvalues.
pub fn log_negativity<T: Real>(rho: &DensityMatrix<T>, side: &[Label]) -> Result<T> {
    if side.is_empty() {
        return Err(Error::InvalidConfig("cut side must be nonempty".into()));
    }
    let mut side_count = 0usize;
    for label in side {
        rho.layout().dim_of(label)?;
        side_count += 1;
    }
    if side_count == rho.layout().len() {
        return Err(Error::InvalidConfig(
            "cut must leave both sides nonempty".into(),
        ));
    }
    let pt = partial_transpose(rho, side)?;
    Ok(hermitian_trace_norm(&pt).log2())
}

/// Closed-form distillable-entanglement bound `log₂(1 + 1/d)` for the
/// swap-twisted private bit with `d`-dimensional shields.
pub fn ed_bound_example<T: Real>(d: usize) -> Result<T> {
    if d < 2 {
        return Err(Error::InvalidSpec("shield dimension must be at least 2".into()));
    }
    Ok(T::from_f64_lossy((1.0 + 1.0 / d as f64).log2()))
}

/// One-way error-correction / privacy-amplification rate
/// `max(0, 1 − h(e_x) − h(e_z))` in bits per raw-key bit.
pub fn key_rate_bound<T: Real>(e_x: T, e_z: T) -> Result<T> {
    let half = T::from_f64_lossy(0.5);
    if e_x < T::zero() || e_x > half || e_z < T::zero() || e_z > half {
        return Err(Error::OutOfRange(
            "error rates must lie in [0, 1/2]".into(),
        ));
    }
    let rate = T::one() - binary_entropy(e_x)? - binary_entropy(e_z)?;
    Ok(rate.max(T::zero()))
}

/// Trace distance between a ccq state and the nearest ideal one with the
/// same eavesdropper marginal; `0` for ideal keys, `≥ 1/2` once the
/// eavesdropper can read the key bit.
///
/// Both operators are block diagonal over the key outcomes, so the
/// distance decomposes as
/// `½ Σ_ij ‖p_ij ρ_ij − δ_ij/d · ρ̄‖_tr` with `ρ̄ = Σ p_ij ρ_ij`.
pub fn security_diagnostic<T: Real>(ccq: &CcqState<T>) -> T {
    let d = ccq.key_dim();
    let uniform = T::from_f64_lossy(1.0 / d as f64);
    let branches = ccq.branches();
    if branches.is_empty() {
        return T::zero();
    }
    let eve_dim = branches[0].eve_state.dim();
    let mut marginal = CMatrix::<T>::zeros(eve_dim, eve_dim);
    for branch in branches {
        marginal += branch.eve_state.entries() * Complex::new(branch.prob, T::zero());
    }

    let half = T::from_f64_lossy(0.5);
    let mut total = T::zero();
    for i in 0..d {
        for j in 0..d {
            let branch = branches.iter().find(|b| b.alice == i && b.bob == j);
            let ideal_weight = if i == j { uniform } else { T::zero() };
            match branch {
                Some(b) => {
                    let diff = b.eve_state.entries() * Complex::new(b.prob, T::zero())
                        - &marginal * Complex::new(ideal_weight, T::zero());
                    total += hermitian_trace_norm(&diff);
                }
                None => {
                    // missing branch: the actual operator block is zero
                    total += ideal_weight * hermitian_trace_norm(&marginal);
                }
            }
        }
    }
    total * half
}

/// One gap-scan trial: measured key rate against the per-copy
/// log-negativity of the source state.
#[derive(Clone, Debug, Serialize)]
pub struct GapRecord {
    /// Shield dimension of the swap-twisted example state.
    pub d: usize,
    /// Measured key rate in bits per requested copy.
    pub key_rate: f64,
    /// Log-negativity per copy across the Alice/Bob cut — the computable
    /// upper bound on distillable entanglement.
    pub ed_bound: f64,
    /// Copies consumed by the run.
    pub n_used: usize,
    /// Whether the run aborted.
    pub aborted: bool,
}

impl GapRecord {
    pub fn validate(&self) -> Result<()> {
        if self.key_rate < 0.0 || self.ed_bound < 0.0 {
            return Err(Error::OutOfRange(
                "gap records require nonnegative rates".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdit::{
        ccq_of, example_pbit, example_pbit_weight, max_entangled, random_pdit_spec,
    };
    use crate::qcore::layout::{labels, SystemLayout};
    use crate::qcore::random::random_density;
    use crate::qcore::rng::SeedStream;
    use crate::qcore::DensityMatrix as DM;
    use crate::scalar::re;

    /// Analytic partial-transpose spectrum of the swap-twisted pbit across
    /// the Alice/Bob cut. Both mixture terms are diagonal in the Bell ⊗
    /// {P₊, complement} product eigenbasis, so the eigenvalues add
    /// termwise; the multiplicities are 1 for the P₊ block and d²−1 for
    /// its complement.
    fn example_trace_norm_oracle(d: usize) -> f64 {
        let p = example_pbit_weight(d);
        let q = 1.0 - p;
        let df = d as f64;
        // transposed Bell projectors have spectrum ±1/2 on the four Bell
        // vectors; ψ₊ and ψ₋ pick up the sign on opposite vectors
        let m_plus = [0.5, 0.5, 0.5, -0.5];
        let m_minus = [0.5, 0.5, -0.5, 0.5];
        // transposed symmetric/antisymmetric shield states
        let s_vals = [1.0 / df, 1.0 / (df * (df + 1.0))];
        let a_vals = [-1.0 / df, 1.0 / (df * (df - 1.0))];
        let mult = [1.0, df * df - 1.0];
        let mut norm = 0.0;
        for alpha in 0..4 {
            for beta in 0..2 {
                let value = p * m_plus[alpha] * s_vals[beta] + q * m_minus[alpha] * a_vals[beta];
                norm += value.abs() * mult[beta];
            }
        }
        norm
    }

    fn alice_side() -> [Label; 2] {
        [labels::key_a(), labels::shield_a()]
    }

    #[test]
    fn product_state_has_zero_log_negativity() {
        let mut stream = SeedStream::root(51);
        let a = random_density::<f64>(SystemLayout::of(&[("A", 2)]), &mut stream);
        let b = random_density::<f64>(SystemLayout::of(&[("B", 3)]), &mut stream);
        let product = a.tensor(&b).unwrap();
        let ln = log_negativity(&product, &[Label::from("A")]).unwrap();
        assert!(ln.abs() < 1e-10);
    }

    #[test]
    fn ebit_log_negativity_is_one() {
        let rho = max_entangled::<f64>(2).unwrap();
        let ln = log_negativity(&rho, &[labels::key_a()]).unwrap();
        assert!((ln - 1.0).abs() < 1e-10);
    }

    #[test]
    fn example_pbit_log_negativity_matches_oracle_and_bound() {
        for d in [2usize, 4] {
            let rho = example_pbit::<f64>(d).unwrap().assemble_pdit();
            let ln = log_negativity(&rho, &alice_side()).unwrap();
            let oracle = example_trace_norm_oracle(d).log2();
            assert!((ln - oracle).abs() < 1e-10, "d={d}: {ln} vs oracle {oracle}");
            let bound: f64 = ed_bound_example(d).unwrap();
            assert!(ln <= bound + 1e-9);
        }
    }

    #[test]
    fn log_negativity_is_additive_on_two_copies() {
        let spec = example_pbit::<f64>(2).unwrap();
        let rho = spec.assemble_pdit();
        let single = log_negativity(&rho, &alice_side()).unwrap();
        let copy: DM<f64> = rho
            .relabeled(&[
                (labels::key_a(), Label::from("A2")),
                (labels::key_b(), Label::from("B2")),
                (labels::shield_a(), Label::from("A2'")),
                (labels::shield_b(), Label::from("B2'")),
            ])
            .unwrap();
        let pair = rho.tensor(&copy).unwrap();
        let double = log_negativity(
            &pair,
            &[
                labels::key_a(),
                labels::shield_a(),
                Label::from("A2"),
                Label::from("A2'"),
            ],
        )
        .unwrap();
        assert!((double - 2.0 * single).abs() < 1e-9);
    }

    #[test]
    fn generated_pdits_are_npt() {
        let mut stream = SeedStream::root(52);
        for _ in 0..10 {
            let spec = random_pdit_spec::<f64>(2, 2, 2, &mut stream);
            let rho = spec.assemble_pdit();
            let ln = log_negativity(&rho, &alice_side()).unwrap();
            assert!(ln > 1e-6, "private state should have positive log-negativity");
        }
    }

    #[test]
    fn log_negativity_rejects_bad_cuts() {
        let rho = max_entangled::<f64>(2).unwrap();
        assert!(log_negativity(&rho, &[]).is_err());
        assert!(log_negativity(&rho, &[labels::key_a(), labels::key_b()]).is_err());
        assert!(log_negativity(&rho, &[Label::from("nope")]).is_err());
    }

    #[test]
    fn ed_bound_values_and_monotonicity() {
        assert!((ed_bound_example::<f64>(2).unwrap() - 0.584_962_500_721_156_2).abs() < 1e-12);
        assert!((ed_bound_example::<f64>(16).unwrap() - 0.087_462_841_250_339_41).abs() < 1e-12);
        let mut previous = f64::INFINITY;
        for d in 2..64 {
            let bound: f64 = ed_bound_example(d).unwrap();
            assert!(bound < previous);
            previous = bound;
        }
        assert!(previous < 0.03);
        assert!(ed_bound_example::<f64>(1).is_err());
    }

    #[test]
    fn key_rate_bound_values() {
        assert!((key_rate_bound(0.0_f64, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(key_rate_bound(0.5_f64, 0.3).unwrap(), 0.0);
        let expected = 1.0 - 2.0 * binary_entropy(0.05_f64).unwrap();
        assert!((key_rate_bound(0.05_f64, 0.05).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.427_206_085_768_087_7).abs() < 1e-12);
        assert!(key_rate_bound(-0.1_f64, 0.0).is_err());
        assert!(key_rate_bound(0.0_f64, 0.6).is_err());
    }

    #[test]
    fn key_rate_bound_is_monotone() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.05).collect();
        for &fixed in &grid {
            let mut previous = f64::INFINITY;
            for &e in &grid {
                let rate = key_rate_bound(e, fixed).unwrap();
                assert!(rate <= previous + 1e-12);
                previous = rate;
            }
        }
    }

    #[test]
    fn diagnostic_is_zero_for_ideal_keys() {
        let mut stream = SeedStream::root(53);
        let spec = random_pdit_spec::<f64>(2, 2, 2, &mut stream);
        let ccq = ccq_of(&spec.assemble_pdit(), 2).unwrap();
        assert!(security_diagnostic(&ccq) < 1e-9);
    }

    #[test]
    fn diagnostic_flags_keys_known_to_eve() {
        // Alice and Bob share a uniform correlated bit that the
        // eavesdropper holds a copy of: ρ = ½ Σ_i |ii⟩⟨ii|_AB ⊗ |i⟩⟨i|_E.
        // Built here as a key measurement of the GHZ-type state
        // purifying the classically correlated mixture.
        let layout = SystemLayout::new(vec![
            (labels::key_a(), 2),
            (labels::key_b(), 2),
            (labels::shield_a(), 1),
            (labels::shield_b(), 1),
        ])
        .unwrap();
        let mut entries = CMatrix::<f64>::zeros(4, 4);
        entries[(0, 0)] = re(0.5);
        entries[(3, 3)] = re(0.5);
        let rho = DM::new(
            layout.restricted_to(&[labels::key_a(), labels::key_b()]).unwrap(),
            entries,
        )
        .unwrap();
        let trivial = DM::<f64>::basis_state(
            layout
                .restricted_to(&[labels::shield_a(), labels::shield_b()])
                .unwrap(),
            &[0, 0],
        )
        .unwrap();
        let full = rho.tensor(&trivial).unwrap();
        let ccq = ccq_of(&full, 2).unwrap();
        // the purification hands Eve orthogonal conditionals
        let diag = security_diagnostic(&ccq);
        assert!(diag >= 0.5 - 1e-9, "diagnostic {diag} below 1/2");
    }

    #[test]
    fn diagnostic_is_invariant_under_key_relabeling() {
        let mut stream = SeedStream::root(54);
        // a biased, noisy key: depolarize the outcome distribution
        let spec = random_pdit_spec::<f64>(2, 2, 2, &mut stream);
        let rho = spec.assemble_pdit();
        let mixed = DM::maximally_mixed(rho.layout().clone());
        let entries = rho.entries() * re(0.8) + mixed.entries() * re(0.2);
        let noisy = DM::new(rho.layout().clone(), entries).unwrap();
        let ccq = ccq_of(&noisy, 2).unwrap();
        let base = security_diagnostic(&ccq);

        // relabel key symbols 0 ↔ 1 on both sides
        let flip = crate::qcore::linalg::pauli_x::<f64>();
        let u = crate::qcore::UnitaryOp::new(
            SystemLayout::new(vec![(labels::key_a(), 2), (labels::key_b(), 2)]).unwrap(),
            crate::qcore::linalg::kron(&flip, &flip),
        )
        .unwrap();
        let relabeled = noisy
            .apply_unitary(&u, &[labels::key_a(), labels::key_b()])
            .unwrap();
        let ccq_relabeled = ccq_of(&relabeled, 2).unwrap();
        assert!((security_diagnostic(&ccq_relabeled) - base).abs() < 1e-9);
    }

    #[test]
    fn gap_record_validation() {
        let good = GapRecord {
            d: 2,
            key_rate: 0.9,
            ed_bound: 0.58,
            n_used: 1000,
            aborted: false,
        };
        good.validate().unwrap();
        let bad = GapRecord {
            key_rate: -0.1,
            ..good
        };
        assert!(bad.validate().is_err());
    }
}
