use std::path::PathBuf;

use qrnet_core::analytics::StdEstimator;
use qrnet_core::qr::TimeUnit;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// `centrality.csv`
    Csv,
    /// `report.json`
    Json,
    /// `edges.tsv`
    Edgelist,
    /// `graph.dot`
    Dot,
}

impl OutputFormat {
    pub fn file_name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "centrality.csv",
            OutputFormat::Json => "report.json",
            OutputFormat::Edgelist => "edges.tsv",
            OutputFormat::Dot => "graph.dot",
        }
    }
}

pub const DEFAULT_FORMATS: [OutputFormat; 3] = [
    OutputFormat::Csv,
    OutputFormat::Json,
    OutputFormat::Edgelist,
];

/// Everything `qrnet analyze` needs for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub posts: PathBuf,
    pub site: Option<String>,
    pub epsilon: f64,
    pub time_unit: TimeUnit,
    pub damping: f64,
    pub weighted: bool,
    pub undirected: bool,
    pub reverse_edges: bool,
    pub std_estimator: StdEstimator,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl RunConfig {
    pub fn new(posts: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            posts: posts.into(),
            site: None,
            epsilon: qrnet_core::qr::DEFAULT_EPSILON,
            time_unit: TimeUnit::Hours,
            damping: 0.85,
            weighted: false,
            undirected: false,
            reverse_edges: false,
            std_estimator: StdEstimator::Sample,
            out_dir: out_dir.into(),
            formats: DEFAULT_FORMATS.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(CliError::Config(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(CliError::Config(format!(
                "damping must lie strictly between 0 and 1, got {}",
                self.damping
            )));
        }
        if self.formats.is_empty() {
            return Err(CliError::Config("no output format selected".into()));
        }
        Ok(())
    }

    /// Label used in reports: `--site`, else the input file stem.
    pub fn site_label(&self) -> String {
        self.site.clone().unwrap_or_else(|| {
            self.posts
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "posts".into())
        })
    }
}
