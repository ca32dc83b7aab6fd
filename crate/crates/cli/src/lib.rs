//! Experiment runner for voterlab: configuration, deterministic parallel
//! replicates, run tables, estimator reports, oracle output and SVG figures.

pub mod config;
pub mod error;
pub mod estimate;
pub mod oracle_cmd;
pub mod render;
pub mod seed;
pub mod simulate;

pub use config::{ExperimentConfig, FileConfig, NamedModel};
pub use error::{CliError, CliResult};
pub use simulate::{read_records, run_experiment, write_records, write_records_to};
