//! Eigenvalue data for twisted circles, intervals, flat tori and cyclic
//! covers of finite graphs.

pub mod cover;
pub mod geometry;
pub mod io;

pub use cover::{
    cycle_cover_build, deck_permutation, multiset_distance, twisted_block_decompose,
    twisted_laplacian, CoverGraph, CoverMatrices, TwistedBlock,
};
pub use fieldlab_numerics::{Ladder, Spectrum, TailLaw, Truncation};
pub use geometry::{
    circle_ladder, dirichlet_cylinder_spectrum, interval_dirichlet_spectrum, reduce_angle,
    torus_spectrum, twisted_circle_lambda0, twisted_circle_spectrum, TwistedCircle,
};
pub use io::{read_csv, spectrum_from_json, spectrum_to_json, write_csv};

#[derive(Debug, thiserror::Error)]
pub enum SpectraError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("base graph is disconnected")]
    Disconnected,
    #[error(transparent)]
    Numerics(#[from] fieldlab_numerics::NumericsError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SpectraError>;
