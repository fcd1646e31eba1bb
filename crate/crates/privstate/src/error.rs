use thiserror::Error;

/// Errors surfaced by state construction, operators and the protocol.
#[derive(Debug, Error)]
pub enum Error {
    #[error("subsystem label `{0}` already present")]
    LabelCollision(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("layouts differ: {0}")]
    LayoutMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace:.12}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("negative-eigenvalue mass {clipped:.3e} exceeds the clip budget")]
    ClipBudgetExceeded { clipped: f64 },

    #[error("operator is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid private-state data: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("insufficient entangled resource: need {needed}, have {available}")]
    InsufficientResource { needed: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
