//! Scenario runner behind the `ndof` command-line tool.

pub mod config;
pub mod error;
pub mod reproduce;
pub mod scenario;

pub use config::ScenarioConfig;
pub use scenario::{run_capacity, run_ndof, run_scenario, validate, Format, RunOptions, Summary, ValidationReport};
