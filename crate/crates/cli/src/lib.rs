pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod params;
pub mod report;
pub mod suite;
pub mod tables;

pub use error::{CliError, Result};
pub use params::Params;
pub use report::{ExperimentReport, ReportBuilder};
