use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
///
/// Each variant names the violated invariant and, where one exists, the
/// measured residual that tripped the check.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NotHermitian: ‖m − m†‖_max = {residual:.3e}")]
    NotHermitian { residual: f64 },
    #[error("NotUnitTrace: trace = {trace:.12}")]
    NotUnitTrace { trace: f64 },
    #[error("NotPSD: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPSD { min_eigenvalue: f64 },
    #[error("NotSymmetric: ‖τ − τᵀ‖_max = {residual:.3e}")]
    NotSymmetric { residual: f64 },
    #[error("NonFinite: matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("DependentVectors: Gram reciprocal condition {rcond:.3e}")]
    DependentVectors { rcond: f64 },
    #[error("SingularCoefficients: coefficient matrix is not invertible")]
    SingularCoefficients,
    #[error("DimensionMismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("NotNormalized: ‖ψ‖ = {norm:.12}")]
    NotNormalized { norm: f64 },
    #[error("InvalidRank: rank must be in 1..=4, got {0}")]
    InvalidRank(usize),
    #[error("NoPurePart: decomposition has no entangled part (C = 0)")]
    NoPurePart,
    #[error("PhaseConstraintViolated: |Σ e^(2iθ) λ″| = {residual:.3e}")]
    PhaseConstraintViolated { residual: f64 },
    #[error("RankMismatch: decomposition says {claimed}, state is {actual}")]
    RankMismatch { claimed: String, actual: String },
    #[error("RankDeficient: λ_{index} = {value:.3e} is numerically zero")]
    RankDeficient { index: usize, value: f64 },
    #[error("ZeroState: all λ_i are zero")]
    ZeroState,
    #[error("NotSpecialUnitary: residual {residual:.3e}")]
    NotSpecialUnitary { residual: f64 },
    #[error("InvalidParams: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
