//! Numerical kernels shared by the rest of the workspace.

pub mod eigen;
pub mod extrapolate;
pub mod hermite;
pub mod hurwitz;
pub mod quadrature;
pub mod spectrum;

pub use eigen::{herm_eig, sym_eig, HermEigen, SymEigen};
pub use extrapolate::{extrapolate, richardson, Basis, ExtrapolationResult};
pub use hermite::{hermite_coeffs, hermite_poly};
pub use hurwitz::lerch_sum;
pub use quadrature::{gauss_legendre, periodic_trapezoid, Interval, QuadKind, QuadratureRule};
pub use spectrum::{Ladder, Spectrum, TailLaw, Truncation, KERNEL_TOL};

pub use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("pole of the continuation at s = {0}")]
    Pole(Complex64),
    #[error("matrix is not symmetric (relative defect {0:.3e})")]
    Asymmetric(f64),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("too few samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("step sizes must be strictly decreasing")]
    NonMonotone,
    #[error("singular system")]
    Singular,
}

pub type Result<T> = std::result::Result<T, NumericsError>;
