use thiserror::Error;

/// Errors produced by the steering-bound toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: max |H - H^dag| = {deviation:.3e} exceeds {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("vector is not normalized: | ||v|| - 1 | = {deviation:.3e} exceeds {tol:.1e}")]
    NotNormalized { deviation: f64, tol: f64 },

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid functional: {0}")]
    InvalidFunctional(String),

    #[error(
        "enumeration infeasible: {assignments:.3e} deterministic assignments exceed cap {cap}; \
         use the seesaw lower bound with heuristic assignment search instead"
    )]
    EnumerationInfeasible { assignments: f64, cap: u64 },

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("state is not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPsd { min_eig: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
