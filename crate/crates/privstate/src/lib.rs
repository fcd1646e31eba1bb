//! Simulator and analysis library for quantum key distribution from
//! private states.
//!
//! Private states ("pdits", "pbits" for two-level keys) are the states
//! whose computational-basis measurement on the key part yields a shared
//! key uncorrelated with any purifying eavesdropper. This crate constructs
//! them and their (un)twisting unitaries, runs an entanglement-assisted key
//! distribution protocol against adversarial state sources, and computes
//! the entanglement and key metrics needed to compare distilled key
//! against distillable entanglement.
//!
//! Module map:
//! - [`qcore`] — dense complex linear algebra, states, measurement, RNG;
//! - [`pdit`] — private-state construction, twisting, key-correlation
//!   extraction;
//! - [`metrics`] — log-negativity, key-rate bounds, security diagnostics;
//! - [`channels`] — adversarial sources and noise models;
//! - [`protocol`] — the six-step key distribution protocol and its
//!   fully-untwisted reference variant;
//! - [`cli`] — scenario configs, batch runners and report writers.
//!
//! Core math is generic over the scalar (`f32`/`f64`) through
//! [`scalar::Real`]; the protocol layer and the concrete aliases below fix
//! `f64`, which is the configuration all documented tolerances refer to.

pub mod channels;
pub mod cli;
pub mod error;
pub mod metrics;
pub mod pdit;
pub mod protocol;
pub mod qcore;
pub mod scalar;

pub use error::{Error, Result};

/// `f64` density matrix — the working state type of the protocol layer.
pub type Density = qcore::DensityMatrix<f64>;
/// `f64` unitary operator.
pub type Unitary = qcore::UnitaryOp<f64>;
/// `f64` Hermitian observable.
pub type Obs = qcore::Observable<f64>;
/// `f64` private-state data.
pub type Pdit = pdit::PditSpec<f64>;
/// `f64` key-correlation (ccq) state.
pub type Ccq = pdit::CcqState<f64>;
/// `f64` noise channel.
pub type Channel = channels::NoiseChannel<f64>;
/// `f64` adversarial source.
pub type Source = channels::SourceSpec<f64>;
