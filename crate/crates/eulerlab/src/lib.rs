//! Config-driven scenarios for `eulerlab-core`: simulation, blowup
//! certification, pressure-law audits, critical families and sweeps.

pub mod config;
pub mod output;
pub mod scenario;
pub mod sweep;

pub use config::{parse_config, parse_config_str, ConfigError, ScenarioConfig};
pub use scenario::{RunOptions, ScenarioError};
