//! Library side of the `qrnet` command: configuration, the analysis
//! pipeline, report and export formats, dump fetching and report comparison.

pub mod compare;
pub mod config;
pub mod error;
pub mod export;
pub mod fetch;
pub mod pipeline;
pub mod report;

pub use config::{OutputFormat, RunConfig};
pub use error::CliError;
pub use report::AnalysisReport;
