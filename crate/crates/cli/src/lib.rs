//! Configuration-driven runner for the credal verification suites and
//! strong-law experiments.

pub mod config;
pub mod output;
pub mod run;

pub use config::{load_config, parse_config, ConfigError, ExperimentConfig, Group, Overrides};
pub use run::{execute, Outcome};
