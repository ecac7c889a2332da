//! Batch experiment runner for belief-revision truth-tracking: paired
//! series over generated trials, figure reproduction, parameter sweeps and
//! space files.

pub mod commands;
pub mod config;
pub mod error;
pub mod runner;
pub mod space_file;
pub mod svg;

pub use config::{BiasKind, MethodConfig, SeriesConfig};
pub use error::{CliError, Result};
pub use runner::{run_series, summarize, SeriesSummary, TrialRecord, CSV_HEADER};
