use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: ‖H − H*‖_F = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("{algorithm} did not converge after {iterations} iterations")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
    },

    #[error("columns are not orthonormal: ‖W*W − I‖_F = {deviation:e}")]
    NotIsometric { deviation: f64 },

    #[error("dimension {n} exceeds the characteristic polynomial limit of {limit}")]
    DimensionTooLarge { n: usize, limit: usize },

    #[error(
        "partial isometry test is ambiguous at this tolerance \
         (singular-value distance {sigma_distance:e}, projection residual {projection_residual:e})"
    )]
    AmbiguousAtTolerance {
        sigma_distance: f64,
        projection_residual: f64,
    },

    #[error("matrix is not a contraction: ‖A‖ = {norm}")]
    NotAContraction { norm: f64 },

    #[error("invalid Jordan profile: {0}")]
    BadProfile(String),

    #[error("A^{power} is not a partial isometry")]
    NotPowerPartialIsometry { power: usize },

    #[error("{what}: residual {residual:e} exceeds bound {bound:e}")]
    ToleranceBreach {
        what: String,
        residual: f64,
        bound: f64,
    },

    #[error("index is finite: A^{power} is not a partial isometry")]
    NotInfiniteIndex { power: usize },

    #[error("matrix is not of class S_n: {0}")]
    NotSn(String),

    #[error("matrix is invertible at tolerance")]
    Invertible,

    #[error("constructed matrix failed validation: {0}")]
    ConstructionFailedValidation(String),

    #[error("invalid parameters: {0}")]
    BadParameters(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures caused by a numerical bound rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::AmbiguousAtTolerance { .. }
                | Error::ToleranceBreach { .. }
                | Error::ConstructionFailedValidation(_)
        )
    }
}
