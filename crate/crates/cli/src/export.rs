//! Text formats written by `qrnet analyze`.

use std::fmt::Write;

use qrnet_core::centrality::{CentralityTable, Measure};
use qrnet_core::qr::QrGraph;

pub const CENTRALITY_HEADER: &str =
    "user_id,degree,betweenness,closeness,pagerank,eigenvector,harmonic";

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("scientific form parses");
    rounded.to_string()
}

/// One row per node in ascending user id order.
pub fn centrality_csv(table: &CentralityTable<f64>) -> String {
    let mut out = String::with_capacity(64 * (table.len() + 1));
    out.push_str(CENTRALITY_HEADER);
    out.push('\n');
    for (i, user) in table.nodes.iter().enumerate() {
        write!(out, "{user}").unwrap();
        for measure in Measure::ALL {
            write!(out, ",{}", format_number(table.scores(measure)[i])).unwrap();
        }
        out.push('\n');
    }
    out
}

/// `src<TAB>dst<TAB>weight<TAB>count`, edges sorted by `(src, dst)`.
pub fn edges_tsv(graph: &QrGraph<f64>) -> String {
    let mut out = String::from("src\tdst\tweight\tcount\n");
    for (src, dst, edge) in graph.edges() {
        writeln!(
            out,
            "{src}\t{dst}\t{}\t{}",
            format_number(edge.weight),
            edge.interaction_count
        )
        .unwrap();
    }
    out
}

const SOURCE_COLOR: &str = "#4e79a7";
const TARGET_COLOR: &str = "coral";
const MIXED_COLOR: &str = "#bab0ac";

/// Graphviz digraph. Nodes that only send edges are blue, nodes that only
/// receive them coral, the rest grey.
pub fn graph_dot(graph: &QrGraph<f64>) -> String {
    let n = graph.node_count();
    let mut has_out = vec![false; n];
    let mut has_in = vec![false; n];
    for (src, dst, _) in graph.edges() {
        has_out[graph.node_index(src).unwrap()] = true;
        has_in[graph.node_index(dst).unwrap()] = true;
    }
    let mut out = String::from("digraph qr {\n  node [shape=circle, style=filled];\n");
    for (i, user) in graph.nodes().iter().enumerate() {
        let color = match (has_out[i], has_in[i]) {
            (true, false) => SOURCE_COLOR,
            (false, true) => TARGET_COLOR,
            _ => MIXED_COLOR,
        };
        writeln!(out, "  \"{user}\" [fillcolor=\"{color}\"];").unwrap();
    }
    for (src, dst, edge) in graph.edges() {
        writeln!(
            out,
            "  \"{src}\" -> \"{dst}\" [weight_sum=\"{}\", count={}];",
            format_number(edge.weight),
            edge.interaction_count
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
