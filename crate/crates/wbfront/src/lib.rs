//! Experiment harness for the well-balanced front solver: configuration
//! files, the time loop, output artifacts and named presets.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;
pub mod table;

pub use config::{parse_config, ConfigError, ExperimentConfig, InitialData, SchemeKind};
pub use run::{run_experiment, RunError, RunOutcome};
