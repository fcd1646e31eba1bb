//! Labeled tensor factorizations of a Hilbert space.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of one subsystem in a tensor factorization.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        Label(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Per-copy variant of this label, e.g. `A(3)` for copy 3.
    pub fn for_copy(&self, copy: usize) -> Label {
        Label(format!("{}({})", self.0, copy))
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_owned())
    }
}

/// Canonical labels for the key part and the shield of a single copy.
pub mod labels {
    use super::Label;

    pub fn key_a() -> Label {
        Label::new("A")
    }

    pub fn key_b() -> Label {
        Label::new("B")
    }

    pub fn shield_a() -> Label {
        Label::new("A'")
    }

    pub fn shield_b() -> Label {
        Label::new("B'")
    }

    pub fn eve() -> Label {
        Label::new("E")
    }

    /// `(A, B, A', B')` — layout order of a single private-state copy.
    pub fn single_copy() -> [Label; 4] {
        [key_a(), key_b(), shield_a(), shield_b()]
    }
}

/// Ordered list of labeled subsystems with their dimensions.
///
/// The basis of the composite space is the row-major product of the
/// subsystem bases in layout order (first subsystem most significant).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SystemLayout {
    subsystems: Vec<(Label, usize)>,
    dim: usize,
}

impl SystemLayout {
    pub fn new(subsystems: Vec<(Label, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (label, dim) in &subsystems {
            if !seen.insert(label.clone()) {
                return Err(Error::LabelCollision(label.to_string()));
            }
            if *dim == 0 {
                return Err(Error::DimensionMismatch(format!(
                    "subsystem {label} has dimension 0"
                )));
            }
        }
        let dim = subsystems.iter().map(|(_, d)| d).product();
        Ok(SystemLayout { subsystems, dim })
    }

    pub fn of(parts: &[(&str, usize)]) -> Self {
        SystemLayout::new(
            parts
                .iter()
                .map(|(name, dim)| (Label::from(*name), *dim))
                .collect(),
        )
        .expect("static layout is valid")
    }

    /// Total dimension (product of subsystem dimensions).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn subsystems(&self) -> &[(Label, usize)] {
        &self.subsystems
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.subsystems.iter().map(|(l, _)| l)
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.position(label).is_some()
    }

    pub fn position(&self, label: &Label) -> Option<usize> {
        self.subsystems.iter().position(|(l, _)| l == label)
    }

    pub fn dim_of(&self, label: &Label) -> Result<usize> {
        self.position(label)
            .map(|i| self.subsystems[i].1)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Row-major strides, one per subsystem.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.subsystems.len()];
        for i in (0..self.subsystems.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.subsystems[i + 1].1;
        }
        strides
    }

    /// Decompose a flat basis index into per-subsystem indices.
    pub fn unravel(&self, mut index: usize) -> Vec<usize> {
        debug_assert!(index < self.dim);
        let mut out = vec![0usize; self.subsystems.len()];
        for (slot, (_, d)) in out.iter_mut().zip(&self.subsystems).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Flatten per-subsystem indices into a basis index.
    pub fn ravel(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.subsystems.len());
        let mut index = 0usize;
        for (i, (_, d)) in indices.iter().zip(&self.subsystems) {
            debug_assert!(i < d);
            index = index * d + i;
        }
        index
    }

    /// Concatenation with `other`; fails on label collision.
    pub fn concat(&self, other: &SystemLayout) -> Result<SystemLayout> {
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        SystemLayout::new(subsystems)
    }

    /// Sub-layout of `keep`, preserving this layout's order.
    pub fn restricted_to(&self, keep: &[Label]) -> Result<SystemLayout> {
        for label in keep {
            if !self.contains(label) {
                return Err(Error::UnknownLabel(label.to_string()));
            }
        }
        SystemLayout::new(
            self.subsystems
                .iter()
                .filter(|(l, _)| keep.contains(l))
                .cloned()
                .collect(),
        )
    }

    /// Sub-layout with `drop` removed, preserving order.
    pub fn without(&self, drop: &[Label]) -> Result<SystemLayout> {
        for label in drop {
            if !self.contains(label) {
                return Err(Error::UnknownLabel(label.to_string()));
            }
        }
        SystemLayout::new(
            self.subsystems
                .iter()
                .filter(|(l, _)| !drop.contains(l))
                .cloned()
                .collect(),
        )
    }

    /// Rename subsystems via `map = [(old, new)]`, keeping order and dims.
    pub fn relabeled(&self, map: &[(Label, Label)]) -> Result<SystemLayout> {
        let mut subsystems = self.subsystems.clone();
        for (old, new) in map {
            let pos = self
                .position(old)
                .ok_or_else(|| Error::UnknownLabel(old.to_string()))?;
            subsystems[pos].0 = new.clone();
        }
        SystemLayout::new(subsystems)
    }
}
