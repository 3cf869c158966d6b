use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("vector length {found} does not match expected length {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigenvalue iteration did not converge after {sweeps} QR sweeps")]
    NoConvergence { sweeps: usize },

    /// A triangular factor has a diagonal entry below `eps * ||R||_F`.
    #[error("triangular factor is numerically singular (|r_ii| = {pivot:e} at i = {index})")]
    NumericallySingular { index: usize, pivot: f64 },

    /// A chain vector in the staircase initialization collapsed; usually the
    /// Segre anchor is overestimated or the eigenvalue estimate is too far off.
    #[error("staircase breakdown at chain vector {column}: norm {norm:e} before scaling")]
    StaircaseBreakdown { column: usize, norm: f64 },

    /// The partial Jacobian lost full column rank; usually the geometric
    /// multiplicity is underestimated.
    #[error("rank-deficient Jacobian: |r_ii| = {pivot:e} below {threshold:e}")]
    RankDeficientJacobian { pivot: f64, threshold: f64 },

    #[error("X is rank-deficient (smallest singular value {sigma_min:e})")]
    RankDeficientX { sigma_min: f64 },

    #[error("assembled Jacobian disagrees with finite differences (relative error {relative_error:e})")]
    JacobianMismatch { relative_error: f64 },
}

impl Error {
    /// Short machine-readable tag used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::NonFinite { .. } => "non_finite",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NumericallySingular { .. } => "numerically_singular",
            Error::StaircaseBreakdown { .. } => "staircase_breakdown",
            Error::RankDeficientJacobian { .. } => "rank_deficient_jacobian",
            Error::RankDeficientX { .. } => "rank_deficient_x",
            Error::JacobianMismatch { .. } => "jacobian_mismatch",
        }
    }
}
