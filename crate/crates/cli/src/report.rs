//! `report.json` schema.

use std::path::Path;

use qrnet_core::analytics::{CorrelationMatrix, MetricStats, RoleSummary, StdEstimator};
use qrnet_core::centrality::{ConvergenceInfo, Measure};
use qrnet_core::ingest::IngestStats;
use qrnet_core::qr::{AnomalyCounts, TimeUnit};
use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub site: String,
    pub config: ConfigEcho,
    pub ingest: IngestStats,
    pub anomalies: AnomalyCounts,
    pub graph: GraphSummary,
    pub roles: RoleSummary,
    pub convergence: ConvergenceInfo,
    pub stats: StatsSection,
    /// `None` when no correlation is computable (see `correlation_note`).
    pub correlation: Option<CorrelationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation_note: Option<String>,
    /// False when an iterative measure stopped before converging.
    pub complete: bool,
}

/// Run settings that influence the numbers. Thread count and output location
/// are left out so reports compare byte-for-byte across machines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: String,
    pub epsilon: f64,
    pub time_unit: TimeUnit,
    pub damping: f64,
    pub weighted: bool,
    pub undirected: bool,
    pub reverse_edges: bool,
    pub std_estimator: StdEstimator,
    pub formats: Vec<OutputFormat>,
}

impl ConfigEcho {
    pub fn from_config(config: &RunConfig) -> Self {
        ConfigEcho {
            input: config
                .posts
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            epsilon: config.epsilon,
            time_unit: config.time_unit,
            damping: config.damping,
            weighted: config.weighted,
            undirected: config.undirected,
            reverse_edges: config.reverse_edges,
            std_estimator: config.std_estimator,
            formats: config.formats.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub interactions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureStats {
    pub measure: Measure,
    pub mean: Option<f64>,
    pub std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSection {
    pub estimator: StdEstimator,
    pub measures: Vec<MeasureStats>,
}

impl StatsSection {
    pub fn from_stats(stats: &MetricStats<f64>) -> Self {
        StatsSection {
            estimator: stats.estimator,
            measures: stats
                .entries
                .iter()
                .map(|(measure, s)| MeasureStats {
                    measure: *measure,
                    mean: s.mean,
                    std: s.std,
                })
                .collect(),
        }
    }

    pub fn get(&self, measure: Measure) -> Option<&MeasureStats> {
        self.measures.iter().find(|m| m.measure == measure)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSection {
    pub labels: Vec<Measure>,
    /// Row-major; `null` marks an undefined coefficient.
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationSection {
    pub fn from_matrix(matrix: &CorrelationMatrix<f64>) -> Self {
        CorrelationSection {
            labels: matrix.labels.to_vec(),
            values: matrix.values.iter().map(|row| row.to_vec()).collect(),
        }
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let report_err = |message: String| CliError::Report {
            path: path.to_path_buf(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| report_err(e.to_string()))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| report_err(format!("not JSON: {e}")))?;
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(SCHEMA_VERSION) => {}
            Some(v) => {
                return Err(report_err(format!(
                    "schema version {v}, this tool reads version {SCHEMA_VERSION}"
                )))
            }
            None => return Err(report_err("missing schema_version".into())),
        }
        serde_json::from_value(value).map_err(|e| report_err(format!("schema mismatch: {e}")))
    }
}
