//! Experiment runner: configuration, parallel sweeps over `(J, σ, m, r)`,
//! error metrics, observed orders and table output.

mod cli;
mod config;
mod metrics;
mod report;

pub use cli::{main_with_args, Cli};
pub use config::{ExperimentConfig, Overrides, SweepGroup, QUAD_POINTS_ENV};
pub use metrics::{error_metrics, observed_order, ErrorMetric};
pub use report::{config_hash, run_experiment, ConvergenceReport, ReportRow, TableFiles, CSV_HEADER};
