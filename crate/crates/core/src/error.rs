use thiserror::Error;

/// Errors shared by all numeric modules.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval data: {0}")]
    InvalidIntervals(String),

    #[error("invalid polynomial data: {0}")]
    InvalidPolynomial(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("0 lies in the set; the residual constraint P(0)=1 requires 0 outside")]
    ZeroInSet,

    #[error("root refinement failed: {0}")]
    RootRefinement(String),

    #[error("quadrature did not reach tolerance {requested:e} (achieved {achieved:e})")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    #[error("linear system numerically singular (condition estimate {cond:e})")]
    SingularSystem { cond: f64 },

    #[error("grid too coarse: bracket gap {gap:e} exceeds requested {requested:e} after refinement cap")]
    GridTooCoarse { gap: f64, requested: f64 },

    #[error("inverse-image endpoint pairing inconsistent: {0}")]
    PairingInconsistency(String),

    #[error("polynomial is numerically zero on the set")]
    ZeroNorm,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
