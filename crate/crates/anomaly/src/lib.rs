//! Polyakov anomaly on the Riemann sphere, renormalized at conical
//! singularities, with branched-cover weights and Rényi exponents.

pub mod conical;
pub mod logint;
pub mod polyakov;
pub mod quad;
pub mod radial;
pub mod sphere;
pub mod weights;

pub use conical::ConicalSurfaceData;
pub use logint::{log_integral_asymptotics, LogIntegralKind, LogIntegralReport, LogIntegralRow};
pub use polyakov::{
    anomaly_regular_conical, anomaly_renormalized, anomaly_smooth, conical_scaling_check,
    counterterm_coefficient, counterterm_slope, epsilon_sequence, AnomalyValue, CountertermSlope,
    EpsLadder, EpsSample, ScalingReport,
};
pub use quad::{converged, integrate, integrate_annulus, Cap, SphereQuad};
pub use radial::{cone_radial_distance, radial_length, solve_radius, RadialDistance};
pub use weights::{
    branched_weights, conical_weight, ramification_weight, renyi_entropy, renyi_exponent, two_point_form,
    BranchData, RenyiValue,
};
pub use sphere::{power_pullback, ChordalLog, LogPoly, Poly3, SphereFn, SpherePoint, Vec3};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnomalyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("ε extrapolation did not converge: {0}")]
    Extrapolation(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Numerics(#[from] fieldlab_numerics::NumericsError),
}

pub type Result<T> = std::result::Result<T, AnomalyError>;
