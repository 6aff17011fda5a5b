//! Witnesses that spectrally cut-off Gaussian covariances are not
//! reflection positive: a test function f supported on one side with
//! ⟨Θf, Π_Λ(Δ + 1)⁻¹f⟩ < 0.

pub mod ball;
pub mod bump;
pub mod certificate;
pub mod compact;
pub mod cylinder;
pub mod line;
pub mod phi4;

pub use ball::{ball_target, fourier_ball_witness, BallParams};
pub use bump::Bump;
pub use certificate::{Construction, WitnessCertificate, WitnessParams};
pub use compact::{circle_modes, compact_witness, CircleMode, CompactParams};
pub use cylinder::{cylinder_pairing, cylinder_pairing_uncut, cylinder_witness};
pub use line::{line_pairing, line_pairing_uncut, line_witness, LinePairing};
pub use phi4::{phi4_reweighting, LatticeSlice, ReweightReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RpError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no negative pairing for n ≤ {n_max}; trend {trend:?}")]
    NotFound { n_max: usize, trend: Vec<(usize, f64)> },
    #[error("moment system rank deficient (σ_min/σ_max = {0:e})")]
    RankDeficient(f64),
    #[error(transparent)]
    Numerics(#[from] fieldlab_numerics::NumericsError),
}

pub type Result<T> = std::result::Result<T, RpError>;

/// Absolute floor under which a pairing is not called negative.
pub const NEGATIVE_TOL: f64 = 1e-12;
