//! Transfer-operator thermodynamics of a nearest-neighbour spin chain with
//! action Σ|σ_{i+1} − σ_i|² + Σ P(σ_i).

pub mod chain;
pub mod mcmc;
pub mod model;
pub mod poly;

pub use chain::{
    free_energy_density, gibbs_expectation, log_partition_function, mixing_check,
    partition_function, top_eigenpair, FreeEnergy, GibbsQuery, TopEigenpair,
};
pub use mcmc::{mcmc_chain, mcmc_free_energy, McmcFreeEnergy, McmcOptions, McmcResult};
pub use model::{build_transfer, TransferModel};
pub use poly::EvenPoly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransferError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("potential is unbounded below")]
    UnboundedBelow,
    #[error("partition function diverges: potential is not confining")]
    Divergent,
    #[error("top eigenvalue is numerically degenerate (gap {gap:.3e} at λ₀ = {lambda0:.6e})")]
    DegenerateGap { lambda0: f64, gap: f64 },
    #[error(transparent)]
    Numerics(#[from] fieldlab_numerics::NumericsError),
}

pub type Result<T> = std::result::Result<T, TransferError>;
