//! ingest → interactions → graph → centralities → analytics → files.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use qrnet_core::analytics::{classify_roles, correlation_matrix, metric_stats};
use qrnet_core::centrality::{CentralityOptions, CentralityTable};
use qrnet_core::ingest::PostReader;
use qrnet_core::qr::{derive_interactions, EdgeDirection, QrGraph};
use qrnet_core::topology::Projection;

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::export::{centrality_csv, edges_tsv, graph_dot};
use crate::report::{
    AnalysisReport, ConfigEcho, CorrelationSection, GraphSummary, StatsSection, SCHEMA_VERSION,
};

pub struct Analysis {
    pub report: AnalysisReport,
    pub graph: QrGraph<f64>,
    pub table: CentralityTable<f64>,
}

/// Runs the whole computation on an in-memory or streamed Posts dump.
pub fn analyze_reader<R: BufRead>(input: R, config: &RunConfig) -> Result<Analysis, CliError> {
    config.validate()?;
    let mut reader = PostReader::new(input);
    let posts = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
    let ingest = *reader.stats();
    log::info!(
        "read {} rows: {} questions, {} answers",
        ingest.rows_read,
        ingest.questions,
        ingest.answers
    );

    let (interactions, anomalies) = derive_interactions::<f64>(&posts, config.time_unit);
    drop(posts);
    let direction = if config.reverse_edges {
        EdgeDirection::ResponderToQuestioner
    } else {
        EdgeDirection::QuestionerToResponder
    };
    let graph = QrGraph::build(&interactions, config.epsilon, direction)
        .map_err(|e| CliError::Config(e.to_string()))?
        .with_anomalies(anomalies);
    log::info!(
        "graph: {} nodes, {} edges",
        graph.node_count(),
        graph.edge_count()
    );

    let options = CentralityOptions {
        projection: if config.undirected {
            Projection::Undirected
        } else {
            Projection::Directed
        },
        weighted: config.weighted,
        damping: config.damping,
        ..CentralityOptions::default()
    };
    let table =
        CentralityTable::compute(&graph, &options).map_err(|e| CliError::Config(e.to_string()))?;
    if !table.convergence.eigenvector_converged && !table.is_empty() {
        log::warn!("eigenvector centrality is degenerate on this graph; scores reported as zero");
    }

    let (roles, _) = classify_roles(&interactions);
    let stats = metric_stats(&table, config.std_estimator);
    let (correlation, correlation_note) = match correlation_matrix(&table) {
        Ok(matrix) => (Some(CorrelationSection::from_matrix(&matrix)), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        site: config.site_label(),
        config: ConfigEcho::from_config(config),
        ingest,
        anomalies,
        graph: GraphSummary {
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            interactions: interactions.len(),
        },
        roles,
        convergence: table.convergence,
        stats: StatsSection::from_stats(&stats),
        correlation,
        correlation_note,
        complete: table.convergence.pagerank_converged,
    };
    Ok(Analysis {
        report,
        graph,
        table,
    })
}

/// Reads `config.posts`, analyzes it and writes the selected formats into
/// `config.out_dir`. An incomplete analysis is still written; callers check
/// `report.complete`.
pub fn run_analyze(config: &RunConfig) -> Result<Analysis, CliError> {
    config.validate()?;
    let file = File::open(&config.posts).map_err(|source| CliError::Input {
        path: config.posts.clone(),
        source,
    })?;
    let analysis = analyze_reader(BufReader::with_capacity(1 << 16, file), config)?;
    write_outputs(&analysis, config)?;
    Ok(analysis)
}

pub fn write_outputs(analysis: &Analysis, config: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&config.out_dir).map_err(|source| {
        CliError::Config(format!(
            "output directory {} is not writable: {source}",
            config.out_dir.display()
        ))
    })?;
    for format in &config.formats {
        let contents = match format {
            OutputFormat::Csv => centrality_csv(&analysis.table),
            OutputFormat::Json => analysis.report.to_json(),
            OutputFormat::Edgelist => edges_tsv(&analysis.graph),
            OutputFormat::Dot => graph_dot(&analysis.graph),
        };
        write_file(&config.out_dir.join(format.file_name()), &contents)?;
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}
