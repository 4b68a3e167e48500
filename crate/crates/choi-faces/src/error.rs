//! Error type shared across the crate.

use crate::channel::MembershipReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix entries must be finite (no NaN or infinity)")]
    NonFinite,
    #[error("tolerances must be strictly positive")]
    InvalidTolerance,
    #[error("matrix is not Hermitian: residual {residual:e}")]
    NonHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not a member of C_n: {0}")]
    NotMember(MembershipReport),
    #[error("matrix is not unitary: residual {residual:e}")]
    NotUnitary { residual: f64 },
    #[error("invalid face direction: {0}")]
    InvalidDirection(String),
    #[error("degenerate direction: whitened min eigenvalue {min_eigenvalue:e} is not negative")]
    DegenerateDirection { min_eigenvalue: f64 },
    #[error("rank {rank} exceeds the maximum {max} for this operation")]
    RankTooHigh { rank: usize, max: usize },
    #[error("interior-descent failed to reduce rank")]
    IterationOverflow,
    #[error("decomposition accumulated more points than the convex-hull bound allows")]
    DecompositionOverflow,
    #[error("dimension n = {n} is not supported by this construction")]
    BadDimension { n: usize },
    #[error("parameters are infeasible: {0}")]
    Infeasible(String),
    #[error("random sampling failed to produce a non-degenerate member")]
    DegenerateSample,
    #[error("unknown example '{name}'; available: {available}")]
    UnknownExample { name: String, available: String },
}
