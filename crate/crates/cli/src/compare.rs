//! Side-by-side view of several `report.json` files.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use qrnet_core::centrality::Measure;

use crate::error::CliError;
use crate::export::format_number;
use crate::report::AnalysisReport;

pub struct Comparison {
    pub reports: Vec<AnalysisReport>,
}

pub fn load(paths: &[PathBuf]) -> Result<Comparison, CliError> {
    if paths.len() < 2 {
        return Err(CliError::Config(format!(
            "compare needs at least two reports, got {}",
            paths.len()
        )));
    }
    let reports = paths
        .iter()
        .map(|p| AnalysisReport::read(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Comparison { reports })
}

pub fn csv_header() -> String {
    let mut header = String::from("site,nodes,edges,qr_ratio");
    for m in Measure::ALL {
        write!(header, ",{0}_mean,{0}_std", m.name()).unwrap();
    }
    header
}

fn cell(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Comparison {
    /// One row per report, in argument order. Undefined values are empty.
    pub fn to_csv(&self) -> String {
        let mut out = csv_header();
        out.push('\n');
        for r in &self.reports {
            write!(
                out,
                "{},{},{},{}",
                csv_field(&r.site),
                r.graph.nodes,
                r.graph.edges,
                cell(r.roles.qr_ratio)
            )
            .unwrap();
            for m in Measure::ALL {
                let s = r.stats.get(m);
                write!(
                    out,
                    ",{},{}",
                    cell(s.and_then(|s| s.mean)),
                    cell(s.and_then(|s| s.std))
                )
                .unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut header = vec![
            "site".to_string(),
            "nodes".into(),
            "edges".into(),
            "qr_ratio".into(),
        ];
        header.extend(Measure::ALL.iter().map(|m| m.name().to_string()));
        let mut rows = vec![header];
        for r in &self.reports {
            let mut row = vec![
                r.site.clone(),
                r.graph.nodes.to_string(),
                r.graph.edges.to_string(),
                r.roles
                    .qr_ratio
                    .map(|q| format!("{q:.2}"))
                    .unwrap_or_else(|| "-".into()),
            ];
            for m in Measure::ALL {
                let s = r.stats.get(m);
                row.push(match (s.and_then(|s| s.mean), s.and_then(|s| s.std)) {
                    (Some(mean), Some(std)) => format!("{mean:.4} ± {std:.4}"),
                    (Some(mean), None) => format!("{mean:.4}"),
                    _ => "-".into(),
                });
            }
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_csv()).map_err(|source| CliError::Output {
            path: path.to_path_buf(),
            source,
        })
    }
}
