//! Experiment driver library behind the `nicem` binary: manufactured cases,
//! configuration and the command implementations, exposed so integration
//! tests can run experiments in-process.

pub mod cases;
pub mod commands;
pub mod config;
pub mod output;

pub use cases::ManufacturedCase;
pub use config::ExperimentConfig;
