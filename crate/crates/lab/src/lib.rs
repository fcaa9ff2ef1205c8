//! Experiment runner for the overlapping cycles shuffle: configuration,
//! trial sharding, stamped JSON-lines / CSV output and one command per
//! experiment family.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod runner;

pub use config::ExperimentConfig;
pub use error::LabError;
