//! Cyclic covers: deck-sum heat traces, free-energy sequences built from
//! twisted blocks, the bottom of the twisted spectrum near θ = 0 and the
//! bounds that follow from it.

pub mod bounds;
pub mod free_energy;
pub mod heat;
pub mod kato;

pub use bounds::{
    eigencount_check, flat_weyl_constant, small_eigen_heat_bound, EigenCount, HeatBoundReport,
};
pub use free_energy::{free_energy_sequence, CoverFreeEnergySeq, CoverGeometry};
pub use heat::{heat_trace_cover, HeatTrace};
pub use kato::{lambda0_analysis, CircleFamily, GraphFamily, Lambda0Curve, TwistedFamily};

#[derive(Debug, thiserror::Error)]
pub enum CoversError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("power-law fit failed: {0}")]
    FitFailed(String),
    #[error("eps0 = {eps0} is not below the lambda1 floor {floor}")]
    EpsilonAboveFloor { eps0: f64, floor: f64 },
    #[error(transparent)]
    Spectra(#[from] fieldlab_spectra::SpectraError),
    #[error(transparent)]
    Zeta(#[from] fieldlab_zeta::ZetaError),
    #[error(transparent)]
    Numerics(#[from] fieldlab_numerics::NumericsError),
}

pub type Result<T> = std::result::Result<T, CoversError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CoversError::InvalidArgument(msg.into()))
}
