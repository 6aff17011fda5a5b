//! Finite-dimensional Gaussian fields with graph-Laplacian precision.

pub mod amplitude;
pub mod green;
pub mod network;
pub mod wick;

pub use amplitude::{
    amplitude_compose, compose, doubling_check, glue, mirror_pieces, reference_precision,
    BoundaryKernel, ComposeReport, DoublingReport, Piece,
};
pub use green::{
    closure_matrix, cn_minus_cd_check, covariance, dn_schur, markov_bayes_check,
    poisson_extend, poisson_operator, rp_gram, CnCdReport, Closure, MarkovReport, RpReport,
};
pub use network::{GaussianNetwork, Reflection};
pub use wick::{
    pairing_polynomial, sample_field, wick_interaction, wick_monte_carlo, wick_power_coeffs,
    wick_product_expectation, wick_quadratic_exact, InteractionStats, PairingPolynomial,
    WickFactor, WickSample,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaussError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degree {0} exceeds the pairing enumeration bound 12")]
    DegreeTooLarge(u32),
    #[error(transparent)]
    Numerics(#[from] fieldlab_numerics::NumericsError),
}

pub type Result<T> = std::result::Result<T, GaussError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(GaussError::InvalidArgument(msg.into()))
}
