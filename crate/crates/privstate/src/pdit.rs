//! Private states: construction from their defining data, twisting and
//! untwisting unitaries, and extraction of the key-correlation (ccq)
//! structure that certifies ideal security.
//!
//! A private state on key part `AB` (dimension `d` each) and shield `A'B'`
//! has the form `(1/d) Σ_{ij} |ii⟩⟨jj|_AB ⊗ U_i ρ U_j†`: a twisted
//! maximally entangled state. Measuring `AB` in the computational basis
//! then yields a uniform shared key uncorrelated with any purifying
//! eavesdropper, and [`ccq_of`] / [`is_ideal_ccq`] check exactly that.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::qcore::density::DensityMatrix;
use crate::qcore::eigen::hermitian_eigen;
use crate::qcore::layout::{labels, SystemLayout};
use crate::qcore::linalg::{identity, max_abs_diff, swap, CMatrix, CVector};
use crate::qcore::random::{random_density, random_unitary};
use crate::qcore::rng::SeedStream;
use crate::qcore::trace_distance;
use crate::qcore::unitary::UnitaryOp;
use crate::scalar::{re, Real};

/// Defining data of a private state: key dimension, shield dimensions,
/// the twisting unitaries `U_0 … U_{d−1}` on the shield, and the shield
/// state itself.
#[derive(Clone, Debug)]
pub struct PditSpec<T: Real> {
    key_dim: usize,
    shield_a_dim: usize,
    shield_b_dim: usize,
    twist_unitaries: Vec<UnitaryOp<T>>,
    shield: DensityMatrix<T>,
}

impl<T: Real> PditSpec<T> {
    pub fn new(
        key_dim: usize,
        shield_a_dim: usize,
        shield_b_dim: usize,
        twist_unitaries: Vec<UnitaryOp<T>>,
        shield: DensityMatrix<T>,
    ) -> Result<Self> {
        if key_dim < 2 {
            return Err(Error::InvalidSpec("key dimension must be at least 2".into()));
        }
        if shield_a_dim == 0 || shield_b_dim == 0 {
            return Err(Error::InvalidSpec("shield dimensions must be positive".into()));
        }
        if twist_unitaries.len() != key_dim {
            return Err(Error::InvalidSpec(format!(
                "expected {} twist unitaries, got {}",
                key_dim,
                twist_unitaries.len()
            )));
        }
        let shield_layout = shield_layout(shield_a_dim, shield_b_dim)?;
        if shield.layout() != &shield_layout {
            return Err(Error::InvalidSpec(
                "shield state must live on (A', B') with the stated dimensions".into(),
            ));
        }
        for u in &twist_unitaries {
            if u.dim() != shield_a_dim * shield_b_dim {
                return Err(Error::InvalidSpec(
                    "twist unitary dimension must match the shield".into(),
                ));
            }
        }
        Ok(PditSpec {
            key_dim,
            shield_a_dim,
            shield_b_dim,
            twist_unitaries,
            shield,
        })
    }

    /// Untwisted private state data: identity twists over a given shield,
    /// assembling to `P₊(d) ⊗ shield`.
    pub fn basic(key_dim: usize, shield: DensityMatrix<T>) -> Result<Self> {
        let (a, b) = (
            shield.layout().dim_of(&labels::shield_a())?,
            shield.layout().dim_of(&labels::shield_b())?,
        );
        let ident = UnitaryOp::identity(shield_layout(a, b)?);
        PditSpec::new(key_dim, a, b, vec![ident; key_dim], shield)
    }

    /// Shield-free private state with one phase per key symbol
    /// (`U_i = e^{iθ_i}` on a trivial one-dimensional shield). Useful for
    /// exercising multi-copy joint states at small total dimension.
    pub fn with_phase_twists(key_dim: usize, phases: &[f64]) -> Result<Self> {
        if phases.len() != key_dim {
            return Err(Error::InvalidSpec("one phase per key symbol required".into()));
        }
        let layout = shield_layout(1, 1)?;
        let shield = DensityMatrix::basis_state(layout.clone(), &[0, 0])?;
        let twists = phases
            .iter()
            .map(|theta| {
                let mut m = CMatrix::zeros(1, 1);
                m[(0, 0)] = Complex::new(
                    T::from_f64_lossy(theta.cos()),
                    T::from_f64_lossy(theta.sin()),
                );
                UnitaryOp::new(layout.clone(), m)
            })
            .collect::<Result<Vec<_>>>()?;
        PditSpec::new(key_dim, 1, 1, twists, shield)
    }

    pub fn key_dim(&self) -> usize {
        self.key_dim
    }

    pub fn shield_a_dim(&self) -> usize {
        self.shield_a_dim
    }

    pub fn shield_b_dim(&self) -> usize {
        self.shield_b_dim
    }

    pub fn shield(&self) -> &DensityMatrix<T> {
        &self.shield
    }

    pub fn twist_unitaries(&self) -> &[UnitaryOp<T>] {
        &self.twist_unitaries
    }

    pub fn shield_dim(&self) -> usize {
        self.shield_a_dim * self.shield_b_dim
    }

    /// `(A, B, A', B')` layout of one assembled copy.
    pub fn copy_layout(&self) -> SystemLayout {
        SystemLayout::new(vec![
            (labels::key_a(), self.key_dim),
            (labels::key_b(), self.key_dim),
            (labels::shield_a(), self.shield_a_dim),
            (labels::shield_b(), self.shield_b_dim),
        ])
        .expect("canonical labels are distinct")
    }

    /// The private state `(1/d) Σ_{ij} |ii⟩⟨jj|_AB ⊗ U_i ρ U_j†`.
    pub fn assemble_pdit(&self) -> DensityMatrix<T> {
        let d = self.key_dim;
        let s = self.shield_dim();
        let layout = self.copy_layout();
        let mut entries = CMatrix::zeros(layout.dim(), layout.dim());
        let weight = re::<T>(1.0 / d as f64);
        let twisted: Vec<CMatrix<T>> = self
            .twist_unitaries
            .iter()
            .map(|u| u.entries() * self.shield.entries())
            .collect();
        for i in 0..d {
            let row_base = (i * d + i) * s;
            for j in 0..d {
                let col_base = (j * d + j) * s;
                let block = &twisted[i] * self.twist_unitaries[j].entries().adjoint() * weight;
                for c in 0..s {
                    for r in 0..s {
                        entries[(row_base + r, col_base + c)] = block[(r, c)];
                    }
                }
            }
        }
        DensityMatrix::from_valid_parts(layout, entries)
    }

    /// Local untwisting `U⁽¹⁾ = Σ_i |i⟩⟨i|_B ⊗ U_i†` on `(B, A', B')`.
    ///
    /// Applied to the assembled state it yields `P₊(d) ⊗ shield`; being
    /// controlled only on Bob's key system, it is implementable on Bob's
    /// side once `A'` has been teleported to him.
    pub fn untwist_local(&self) -> UnitaryOp<T> {
        let d = self.key_dim;
        let s = self.shield_dim();
        let layout = SystemLayout::new(vec![
            (labels::key_b(), d),
            (labels::shield_a(), self.shield_a_dim),
            (labels::shield_b(), self.shield_b_dim),
        ])
        .expect("canonical labels are distinct");
        let mut entries = CMatrix::zeros(d * s, d * s);
        for i in 0..d {
            let block = self.twist_unitaries[i].entries().adjoint();
            let base = i * s;
            for c in 0..s {
                for r in 0..s {
                    entries[(base + r, base + c)] = block[(r, c)];
                }
            }
        }
        UnitaryOp::from_valid_parts(layout, entries)
    }

    /// Global untwisting `U⁽²⁾ = Σ_{ij} |ij⟩⟨ij|_AB ⊗ U_ij†` on
    /// `(A, B, A', B')`.
    ///
    /// The diagonal of `table` must equal this spec's twist unitaries; the
    /// off-diagonal entries are arbitrary, and the image of the assembled
    /// state is `P₊(d) ⊗ shield` for every choice.
    pub fn untwist_global(&self, table: &[Vec<UnitaryOp<T>>]) -> Result<UnitaryOp<T>> {
        let d = self.key_dim;
        let s = self.shield_dim();
        if table.len() != d || table.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidSpec(format!("table must be {d}x{d}")));
        }
        for (i, row) in table.iter().enumerate() {
            for (j, u) in row.iter().enumerate() {
                if u.dim() != s {
                    return Err(Error::InvalidSpec(
                        "table unitary dimension must match the shield".into(),
                    ));
                }
                if i == j {
                    let deviation = max_abs_diff(u.entries(), self.twist_unitaries[i].entries());
                    if deviation > T::validity_eps() {
                        return Err(Error::InvalidSpec(format!(
                            "table diagonal ({i},{i}) deviates from the spec by {:.3e}",
                            deviation.to_f64_lossy()
                        )));
                    }
                }
            }
        }
        let layout = self.copy_layout();
        let mut entries = CMatrix::zeros(layout.dim(), layout.dim());
        for i in 0..d {
            for j in 0..d {
                let block = table[i][j].entries().adjoint();
                let base = (i * d + j) * s;
                for c in 0..s {
                    for r in 0..s {
                        entries[(base + r, base + c)] = block[(r, c)];
                    }
                }
            }
        }
        Ok(UnitaryOp::from_valid_parts(layout, entries))
    }

    /// Global untwisting table completed with identities off the diagonal.
    pub fn untwist_global_default(&self) -> UnitaryOp<T> {
        let ident = UnitaryOp::identity(
            shield_layout(self.shield_a_dim, self.shield_b_dim).expect("valid dims"),
        );
        let table: Vec<Vec<UnitaryOp<T>>> = (0..self.key_dim)
            .map(|i| {
                (0..self.key_dim)
                    .map(|j| {
                        if i == j {
                            self.twist_unitaries[i].clone()
                        } else {
                            ident.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        self.untwist_global(&table)
            .expect("diagonal matches by construction")
    }
}

fn shield_layout(a: usize, b: usize) -> Result<SystemLayout> {
    SystemLayout::new(vec![(labels::shield_a(), a), (labels::shield_b(), b)])
}

/// Normalized projector onto the symmetric subspace of `d ⊗ d`.
pub fn symmetric_state<T: Real>(d: usize) -> DensityMatrix<T> {
    let v = swap::<T>(d);
    let dim = d * d;
    let entries = (identity(dim) + v) * re::<T>(1.0 / (d * (d + 1)) as f64);
    DensityMatrix::from_valid_parts(shield_layout(d, d).expect("valid dims"), entries)
}

/// Normalized projector onto the antisymmetric subspace of `d ⊗ d`.
pub fn antisymmetric_state<T: Real>(d: usize) -> DensityMatrix<T> {
    let v = swap::<T>(d);
    let dim = d * d;
    let entries = (identity(dim) - v) * re::<T>(1.0 / (d * (d - 1)) as f64);
    DensityMatrix::from_valid_parts(shield_layout(d, d).expect("valid dims"), entries)
}

/// The swap-twisted private bit with `d`-dimensional shields:
/// key dimension 2, `U_0 = I`, `U_1 = SWAP`, shield
/// `p ρ_s + (1−p) ρ_a` with `p = (1 + 1/d)/2`.
///
/// Its assembled form is `p |ψ₊⟩⟨ψ₊| ⊗ ρ_s + (1−p) |ψ₋⟩⟨ψ₋| ⊗ ρ_a`: a key
/// bit perfectly protected by the shield while carrying arbitrarily little
/// distillable entanglement as `d` grows.
pub fn example_pbit<T: Real>(d: usize) -> Result<PditSpec<T>> {
    if d < 2 {
        return Err(Error::InvalidSpec("shield dimension must be at least 2".into()));
    }
    let p = example_pbit_weight(d);
    let sym = symmetric_state::<T>(d);
    let asym = antisymmetric_state::<T>(d);
    let entries = sym.entries() * re::<T>(p) + asym.entries() * re::<T>(1.0 - p);
    let shield = DensityMatrix::from_valid_parts(shield_layout(d, d)?, entries);
    let layout = shield_layout(d, d)?;
    let u0 = UnitaryOp::identity(layout.clone());
    let u1 = UnitaryOp::new(layout, swap(d))?;
    PditSpec::new(2, d, d, vec![u0, u1], shield)
}

/// Mixing weight `p = (1 + 1/d)/2` of [`example_pbit`].
pub fn example_pbit_weight(d: usize) -> f64 {
    0.5 * (1.0 + 1.0 / d as f64)
}

/// Projector onto `(1/√d) Σ_i |ii⟩` on layout `(A, B)`.
pub fn max_entangled<T: Real>(d: usize) -> Result<DensityMatrix<T>> {
    if d < 2 {
        return Err(Error::InvalidSpec("dimension must be at least 2".into()));
    }
    let layout = SystemLayout::new(vec![(labels::key_a(), d), (labels::key_b(), d)])?;
    let mut psi = CVector::zeros(d * d);
    for i in 0..d {
        psi[i * d + i] = Complex::new(T::one(), T::zero());
    }
    DensityMatrix::pure(layout, &psi)
}

/// Random private-state data: Haar twists over a random full-rank shield.
pub fn random_pdit_spec<T: Real>(
    key_dim: usize,
    shield_a_dim: usize,
    shield_b_dim: usize,
    stream: &mut SeedStream,
) -> PditSpec<T> {
    let layout = shield_layout(shield_a_dim, shield_b_dim).expect("valid dims");
    let shield = random_density(layout.clone(), stream);
    let twists = (0..key_dim)
        .map(|_| random_unitary(layout.clone(), stream))
        .collect();
    PditSpec::new(key_dim, shield_a_dim, shield_b_dim, twists, shield)
        .expect("generated data is consistent")
}

/// One outcome branch of a key measurement: the pair of key symbols, its
/// probability, and the eavesdropper's conditional state.
#[derive(Clone, Debug)]
pub struct CcqBranch<T: Real> {
    pub alice: usize,
    pub bob: usize,
    pub prob: T,
    pub eve_state: DensityMatrix<T>,
}

/// Key-outcome distribution plus conditional eavesdropper states after a
/// computational-basis measurement of the key part.
#[derive(Clone, Debug)]
pub struct CcqState<T: Real> {
    key_dim: usize,
    probs: Vec<Vec<T>>,
    branches: Vec<CcqBranch<T>>,
}

impl<T: Real> CcqState<T> {
    pub fn key_dim(&self) -> usize {
        self.key_dim
    }

    /// `probs[i][j]` — probability of Alice reading `i` and Bob `j`.
    pub fn probs(&self) -> &[Vec<T>] {
        &self.probs
    }

    /// Branches with probability above the rank cutoff.
    pub fn branches(&self) -> &[CcqBranch<T>] {
        &self.branches
    }

    pub fn validate(&self) -> Result<()> {
        let mut total = T::zero();
        for row in &self.probs {
            for &p in row {
                if p < -T::validity_eps() {
                    return Err(Error::OutOfRange("negative outcome probability".into()));
                }
                total += p;
            }
        }
        if (total - T::one()).abs() > T::validity_eps() {
            return Err(Error::TraceNotOne {
                trace: total.to_f64_lossy(),
            });
        }
        for branch in &self.branches {
            branch.eve_state.validate()?;
        }
        Ok(())
    }
}

/// Extract the ccq structure of a state on `(A, B, A', B')` with key
/// dimension `d`: purify with an eavesdropper register, measure the key
/// part exactly (all branches), and trace the shield out of each branch.
pub fn ccq_of<T: Real>(rho_full: &DensityMatrix<T>, d: usize) -> Result<CcqState<T>> {
    let layout = rho_full.layout();
    if layout.len() < 2 {
        return Err(Error::DimensionMismatch(
            "state must have a two-part key factor".into(),
        ));
    }
    let subsystems = layout.subsystems();
    if subsystems[0].1 != d || subsystems[1].1 != d {
        return Err(Error::DimensionMismatch(format!(
            "key subsystems have dimensions {}x{}, expected {d}x{d}",
            subsystems[0].1, subsystems[1].1
        )));
    }
    let shield_dim = layout.dim() / (d * d);

    // Spectral purification: |ψ⟩ = Σ_k √λ_k |v_k⟩ |k⟩_E. For branch (i, j)
    // let w_k = ⟨ij|v_k⟩ on the shield; then p_ij = Σ_k λ_k ‖w_k‖² and
    // ρ_E[k, l] = √(λ_k λ_l) ⟨w_l|w_k⟩ / p_ij. The eavesdropper register is
    // never materialized jointly with the shield, which keeps large-shield
    // states tractable.
    let (values, vectors) = hermitian_eigen(rho_full.entries());
    let kept: Vec<(T, usize)> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > T::rank_eps())
        .map(|(k, v)| (*v, k))
        .collect();
    let rank = kept.len().max(1);
    let eve_layout = SystemLayout::new(vec![(labels::eve(), rank)])?;

    let mut probs = vec![vec![T::zero(); d]; d];
    let mut branches = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let base = (i * d + j) * shield_dim;
            let mut p = T::zero();
            for (value, col) in &kept {
                let mut norm_sq = T::zero();
                for s in 0..shield_dim {
                    norm_sq += vectors[(base + s, *col)].norm_sqr();
                }
                p += *value * norm_sq;
            }
            probs[i][j] = p;
            if p <= T::rank_eps() {
                continue;
            }
            let mut eve = CMatrix::zeros(rank, rank);
            for (k, (vk, ck)) in kept.iter().enumerate() {
                for (l, (vl, cl)) in kept.iter().enumerate() {
                    let mut overlap = Complex::new(T::zero(), T::zero());
                    for s in 0..shield_dim {
                        overlap += vectors[(base + s, *cl)].conj() * vectors[(base + s, *ck)];
                    }
                    eve[(k, l)] = overlap * Complex::new((*vk * *vl).sqrt() / p, T::zero());
                }
            }
            branches.push(CcqBranch {
                alice: i,
                bob: j,
                prob: p,
                eve_state: DensityMatrix::from_valid_parts(eve_layout.clone(), eve),
            });
        }
    }
    Ok(CcqState {
        key_dim: d,
        probs,
        branches,
    })
}

/// Whether a ccq state is ideal at tolerance `tol`: the outcome
/// distribution is `δ_ij / d` and all eavesdropper conditionals coincide.
pub fn is_ideal_ccq<T: Real>(ccq: &CcqState<T>, tol: T) -> bool {
    let d = ccq.key_dim;
    let uniform = T::from_f64_lossy(1.0 / d as f64);
    for i in 0..d {
        for j in 0..d {
            let ideal = if i == j { uniform } else { T::zero() };
            if (ccq.probs[i][j] - ideal).abs() > tol {
                return false;
            }
        }
    }
    for (a, left) in ccq.branches.iter().enumerate() {
        for right in ccq.branches.iter().skip(a + 1) {
            let distance = trace_distance(&left.eve_state, &right.eve_state)
                .expect("branches share the eavesdropper layout");
            if distance > tol {
                return false;
            }
        }
    }
    true
}
