//! Adversary and noise models: the source abstraction by which an
//! eavesdropper distributes states, i.i.d. noise channels, small-n
//! correlated (joint) attacks, and entangled-resource sources of
//! configurable fidelity.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pdit::{max_entangled, PditSpec};
use crate::qcore::density::DensityMatrix;
use crate::qcore::layout::{labels, Label, SystemLayout};
use crate::qcore::linalg::{clock, identity, kron, max_abs_diff, pauli_x, pauli_z, shift, CMatrix};
use crate::qcore::rng::SeedStream;
use crate::qcore::unitary::UnitaryOp;
use crate::scalar::{re, Real};

/// Largest total dimension a dense multi-copy (joint) state may take.
pub const DENSE_DIM_CAP: usize = 4096;

/// Completely positive trace-preserving map given by Kraus operators on a
/// stated subsystem set.
#[derive(Clone, Debug)]
pub struct NoiseChannel<T: Real> {
    layout: SystemLayout,
    kraus: Vec<CMatrix<T>>,
}

impl<T: Real> NoiseChannel<T> {
    /// Validates completeness `Σ K† K = I` within `T::validity_eps()`.
    pub fn new(layout: SystemLayout, kraus: Vec<CMatrix<T>>) -> Result<Self> {
        let dim = layout.dim();
        let mut sum = CMatrix::<T>::zeros(dim, dim);
        for k in &kraus {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch(
                    "Kraus operator does not match the channel layout".into(),
                ));
            }
            sum += k.adjoint() * k;
        }
        let deviation = max_abs_diff(&sum, &identity(dim));
        if deviation > T::validity_eps() {
            return Err(Error::InvalidSpec(format!(
                "Kraus completeness violated by {:.3e}",
                deviation.to_f64_lossy()
            )));
        }
        Ok(NoiseChannel { layout, kraus })
    }

    pub fn identity_channel(layout: SystemLayout) -> Self {
        let dim = layout.dim();
        NoiseChannel {
            kraus: vec![identity(dim)],
            layout,
        }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn kraus(&self) -> &[CMatrix<T>] {
        &self.kraus
    }

    /// `Σ_k (K_k ⊗ I) ρ (K_k ⊗ I)†` with the operators embedded on this
    /// channel's subsystem labels.
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let targets: Vec<Label> = self.layout.labels().cloned().collect();
        let dims: Vec<usize> = self.layout.subsystems().iter().map(|(_, d)| *d).collect();
        let mut entries = CMatrix::<T>::zeros(rho.dim(), rho.dim());
        for k in &self.kraus {
            entries += rho.conjugate_on(k, &dims, &targets)?;
        }
        Ok(DensityMatrix::from_valid_parts(
            rho.layout().clone(),
            entries,
        ))
    }

    /// Same channel acting on differently named subsystems.
    pub fn retargeted(&self, targets: &[Label]) -> Result<NoiseChannel<T>> {
        if targets.len() != self.layout.len() {
            return Err(Error::DimensionMismatch(
                "retarget requires one label per channel subsystem".into(),
            ));
        }
        let map: Vec<(Label, Label)> = self
            .layout
            .labels()
            .cloned()
            .zip(targets.iter().cloned())
            .collect();
        Ok(NoiseChannel {
            layout: self.layout.relabeled(&map)?,
            kraus: self.kraus.clone(),
        })
    }
}

/// With probability `q` replace the key part `AB` (dimension `d` each) by
/// the maximally mixed state, acting as identity on everything else.
///
/// Kraus form: `√(1−q+q/D²) · I` plus `(√q / D) · W_ab` over the
/// nontrivial Heisenberg-Weyl operators of the combined `D = d²` system.
pub fn depolarize_key<T: Real>(q: f64, key_dim: usize) -> Result<NoiseChannel<T>> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange(format!("depolarizing rate {q}")));
    }
    let layout = SystemLayout::new(vec![
        (labels::key_a(), key_dim),
        (labels::key_b(), key_dim),
    ])?;
    let dim = key_dim * key_dim;
    let mut kraus = Vec::new();
    let keep = (1.0 - q + q / (dim * dim) as f64).sqrt();
    kraus.push(identity(dim) * re::<T>(keep));
    if q > 0.0 {
        let weight = q.sqrt() / dim as f64;
        let x = shift::<T>(dim);
        let z = clock::<T>(dim);
        let mut x_pow = identity(dim);
        for a in 0..dim {
            let mut w = x_pow.clone();
            for b in 0..dim {
                if a != 0 || b != 0 {
                    kraus.push(&w * re::<T>(weight));
                }
                if b + 1 < dim {
                    w *= &z;
                }
            }
            if a + 1 < dim {
                x_pow = &x * x_pow;
            }
        }
    }
    NoiseChannel::new(layout, kraus)
}

/// Independent bit flip (`σ_x` with probability `p_bit`) and phase flip
/// (`σ_z` with probability `p_phase`) on one qubit.
pub fn flip_channels<T: Real>(p_bit: f64, p_phase: f64, target: Label) -> Result<NoiseChannel<T>> {
    for p in [p_bit, p_phase] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("flip probability {p}")));
        }
    }
    let layout = SystemLayout::new(vec![(target, 2)])?;
    let x = pauli_x::<T>();
    let z = pauli_z::<T>();
    let kraus = vec![
        identity(2) * re::<T>(((1.0 - p_bit) * (1.0 - p_phase)).sqrt()),
        &x * re::<T>((p_bit * (1.0 - p_phase)).sqrt()),
        &z * re::<T>(((1.0 - p_bit) * p_phase).sqrt()),
        &x * &z * re::<T>((p_bit * p_phase).sqrt()),
    ];
    NoiseChannel::new(layout, kraus)
}

/// Channel that applies a fixed unitary.
pub fn unitary_channel<T: Real>(u: &UnitaryOp<T>) -> NoiseChannel<T> {
    NoiseChannel {
        layout: u.layout().clone(),
        kraus: vec![u.entries().clone()],
    }
}

/// Two-qubit state `v P₊ + (1−v) I/4` on `(A, B)`.
pub fn werner<T: Real>(v: f64) -> Result<DensityMatrix<T>> {
    if !(-1.0 / 3.0..=1.0).contains(&v) {
        return Err(Error::OutOfRange(format!("Werner parameter {v}")));
    }
    let p_plus = max_entangled::<T>(2)?;
    let layout = p_plus.layout().clone();
    let entries = p_plus.entries() * re::<T>(v)
        + DensityMatrix::<T>::maximally_mixed(layout.clone()).entries() * re::<T>(1.0 - v);
    Ok(DensityMatrix::from_valid_parts(layout, entries))
}

/// Werner parameter giving fidelity `f` to the maximally entangled state.
pub fn werner_parameter_for_fidelity(f: f64) -> f64 {
    (4.0 * f - 1.0) / 3.0
}

/// `count` copies of the Werner state with fidelity `f` to `P₊(2)`.
///
/// `f = 1` gives exact entangled bits; the trace distance to `P₊` is
/// `1 − f` throughout the admissible range `[1/2, 1]`. The family is
/// deterministic; the stream argument is part of the source interface and
/// reserved for jittered variants.
pub fn ebit_source<T: Real>(
    fidelity: f64,
    count: usize,
    _stream: &mut SeedStream,
) -> Result<Vec<DensityMatrix<T>>> {
    if !(0.5..=1.0).contains(&fidelity) {
        return Err(Error::OutOfRange(format!(
            "resource fidelity {fidelity} outside [1/2, 1]"
        )));
    }
    let state = werner::<T>(werner_parameter_for_fidelity(fidelity))?;
    Ok(vec![state; count])
}

/// How the adversary prepares the requested copies.
#[derive(Clone, Debug)]
pub enum SourceMode<T: Real> {
    /// Exact copies of the target private state.
    Honest,
    /// Each copy passed through the same noise channel.
    IidAttack { channel: NoiseChannel<T> },
    /// An explicit joint state over all copies (dense, small n).
    JointAttack { joint_state: DensityMatrix<T> },
}

/// Source handing Alice and Bob their `n` copies, plus the quality of the
/// entangled resource available to the distillation step.
#[derive(Clone, Debug)]
pub struct SourceSpec<T: Real> {
    pub target: PditSpec<T>,
    pub mode: SourceMode<T>,
    /// Fidelity of the candidate resource pairs handed to verification;
    /// `1.0` models honest distillation of exact pairs.
    pub ebit_fidelity: f64,
}

impl<T: Real> SourceSpec<T> {
    pub fn honest(target: PditSpec<T>) -> Self {
        SourceSpec {
            target,
            mode: SourceMode::Honest,
            ebit_fidelity: 1.0,
        }
    }

    pub fn iid_attack(target: PditSpec<T>, channel: NoiseChannel<T>) -> Self {
        SourceSpec {
            target,
            mode: SourceMode::IidAttack { channel },
            ebit_fidelity: 1.0,
        }
    }

    pub fn joint_attack(target: PditSpec<T>, joint_state: DensityMatrix<T>) -> Self {
        SourceSpec {
            target,
            mode: SourceMode::JointAttack { joint_state },
            ebit_fidelity: 1.0,
        }
    }

    pub fn with_ebit_fidelity(mut self, fidelity: f64) -> Self {
        self.ebit_fidelity = fidelity;
        self
    }

    /// Layout of `n` copies: per-copy labels `A(i), B(i), A'(i), B'(i)`
    /// in copy-major order.
    pub fn joint_layout(&self, n: usize) -> Result<SystemLayout> {
        let mut subsystems = Vec::with_capacity(4 * n);
        for copy in 0..n {
            for (label, dim) in self.target.copy_layout().subsystems() {
                subsystems.push((label.for_copy(copy), *dim));
            }
        }
        SystemLayout::new(subsystems)
    }
}

/// The copies produced by a source draw.
#[derive(Clone, Debug)]
pub enum CopySet<T: Real> {
    /// `count` entrywise-identical copies of `state`; held once.
    Iid {
        state: DensityMatrix<T>,
        count: usize,
    },
    /// One joint state over `count` copies, per-copy labels.
    Joint {
        state: DensityMatrix<T>,
        count: usize,
    },
}

impl<T: Real> CopySet<T> {
    pub fn count(&self) -> usize {
        match self {
            CopySet::Iid { count, .. } | CopySet::Joint { count, .. } => *count,
        }
    }

    /// Materialize the per-copy states (small `n` only).
    pub fn to_states(&self) -> Vec<DensityMatrix<T>> {
        match self {
            CopySet::Iid { state, count } => vec![state.clone(); *count],
            CopySet::Joint { state, count } => (0..*count)
                .map(|copy| {
                    let keep: Vec<Label> = labels::single_copy()
                        .iter()
                        .map(|l| l.for_copy(copy))
                        .collect();
                    state
                        .partial_trace(&keep)
                        .expect("joint layout has per-copy labels")
                })
                .collect(),
        }
    }
}

/// Draw `n` copies from the source. Honest and i.i.d. modes produce `n`
/// identical copies (all randomness sits in downstream measurements);
/// joint mode returns the adversary's explicit state after validating its
/// layout and the dense-dimension budget.
pub fn draw_copies<T: Real>(
    source: &SourceSpec<T>,
    n: usize,
    _stream: &mut SeedStream,
) -> Result<CopySet<T>> {
    if n == 0 {
        return Err(Error::InvalidConfig("at least one copy required".into()));
    }
    match &source.mode {
        SourceMode::Honest => Ok(CopySet::Iid {
            state: source.target.assemble_pdit(),
            count: n,
        }),
        SourceMode::IidAttack { channel } => {
            let state = channel.apply(&source.target.assemble_pdit())?;
            Ok(CopySet::Iid { state, count: n })
        }
        SourceMode::JointAttack { joint_state } => {
            let expected = source.joint_layout(n)?;
            if expected.dim() > DENSE_DIM_CAP {
                return Err(Error::DimensionMismatch(format!(
                    "joint state dimension {} exceeds the dense budget {}",
                    expected.dim(),
                    DENSE_DIM_CAP
                )));
            }
            if joint_state.layout() != &expected {
                return Err(Error::LayoutMismatch(
                    "joint state must cover n copies with per-copy labels".into(),
                ));
            }
            Ok(CopySet::Joint {
                state: joint_state.clone(),
                count: n,
            })
        }
    }
}
