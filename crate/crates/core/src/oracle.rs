//! Slow reference implementations of every centrality measure.
//!
//! Everything here works on a dense adjacency matrix and shares no code with
//! [`crate::centrality`]: distances come from Floyd–Warshall, betweenness
//! from enumerating every simple path, PageRank from an explicit Google
//! matrix. Size caps keep the exhaustive searches cheap.

use thiserror::Error;

use crate::num::Scalar;
use crate::qr::QrGraph;

pub const MAX_NODES: usize = 12;
pub const MAX_BETWEENNESS_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle supports at most {limit} nodes, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) out of range")]
    OutOfRange(usize, usize),
}

/// Small graph as an `n × n` matrix. `weights[i][j] > 0` exactly where
/// `adjacency[i][j]` holds.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseGraph {
    pub n: usize,
    pub adjacency: Vec<Vec<bool>>,
    pub weights: Vec<Vec<f64>>,
}

impl DenseGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, OracleError> {
        let weighted: Vec<_> = edges.iter().map(|&(a, b)| (a, b, 1.0)).collect();
        Self::with_weights(n, &weighted)
    }

    pub fn with_weights(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, OracleError> {
        if n > MAX_NODES {
            return Err(OracleError::TooLarge {
                n,
                limit: MAX_NODES,
            });
        }
        let mut adjacency = vec![vec![false; n]; n];
        let mut weights = vec![vec![0.0; n]; n];
        for &(a, b, w) in edges {
            if a >= n || b >= n {
                return Err(OracleError::OutOfRange(a, b));
            }
            if a == b {
                return Err(OracleError::SelfLoop(a));
            }
            adjacency[a][b] = true;
            weights[a][b] = w;
        }
        Ok(DenseGraph {
            n,
            adjacency,
            weights,
        })
    }

    /// Copies a [`QrGraph`]; matrix index `i` is `graph.nodes()[i]`.
    pub fn from_qr_graph<T: Scalar>(graph: &QrGraph<T>) -> Result<Self, OracleError> {
        let edges: Vec<_> = graph
            .edges()
            .map(|(s, d, e)| {
                (
                    graph.node_index(s).unwrap(),
                    graph.node_index(d).unwrap(),
                    e.weight.to_f64_lossy(),
                )
            })
            .collect();
        Self::with_weights(graph.node_count(), &edges)
    }

    /// Both directions of every edge; antiparallel weights are added.
    pub fn symmetrized(&self) -> DenseGraph {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.adjacency[i][j] = self.adjacency[i][j] || self.adjacency[j][i];
                out.weights[i][j] = self.weights[i][j] + self.weights[j][i];
            }
        }
        out
    }

    fn length(&self, i: usize, j: usize, weighted: bool) -> f64 {
        if weighted {
            1.0 / self.weights[i][j]
        } else {
            1.0
        }
    }
}

fn check_size(g: &DenseGraph, limit: usize) -> Result<(), OracleError> {
    if g.n > limit {
        Err(OracleError::TooLarge { n: g.n, limit })
    } else {
        Ok(())
    }
}

/// Floyd–Warshall hop distances; `None` means unreachable.
pub fn oracle_distances(g: &DenseGraph) -> Result<Vec<Vec<Option<u32>>>, OracleError> {
    let d = floyd_warshall(g, false)?;
    Ok(d.iter()
        .map(|row| {
            row.iter()
                .map(|&x| x.is_finite().then_some(x as u32))
                .collect()
        })
        .collect())
}

/// Floyd–Warshall over arc lengths `1 / weight`; `f64::INFINITY` when unreachable.
pub fn oracle_weighted_distances(g: &DenseGraph) -> Result<Vec<Vec<f64>>, OracleError> {
    floyd_warshall(g, true)
}

fn floyd_warshall(g: &DenseGraph, weighted: bool) -> Result<Vec<Vec<f64>>, OracleError> {
    check_size(g, MAX_NODES)?;
    let n = g.n;
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            if g.adjacency[i][j] {
                d[i][j] = g.length(i, j, weighted);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    Ok(d)
}

pub fn oracle_degree(g: &DenseGraph) -> Vec<f64> {
    let n = g.n;
    (0..n)
        .map(|v| {
            let out = (0..n).filter(|&j| g.adjacency[v][j]).count();
            let inc = (0..n).filter(|&i| g.adjacency[i][v]).count();
            (out + inc) as f64 / (n as f64 - 1.0)
        })
        .collect()
}

pub fn oracle_closeness(g: &DenseGraph, weighted: bool) -> Result<Vec<f64>, OracleError> {
    let d = floyd_warshall(g, weighted)?;
    let n = g.n;
    Ok((0..n)
        .map(|v| {
            let incoming: Vec<f64> = (0..n)
                .filter(|&u| u != v && d[u][v].is_finite())
                .map(|u| d[u][v])
                .collect();
            if incoming.is_empty() {
                return 0.0;
            }
            let k = incoming.len() as f64;
            let total: f64 = incoming.iter().sum();
            (k / total) * (k / (n as f64 - 1.0))
        })
        .collect())
}

pub fn oracle_harmonic(g: &DenseGraph, weighted: bool) -> Result<Vec<f64>, OracleError> {
    let d = floyd_warshall(g, weighted)?;
    let n = g.n;
    Ok((0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v && d[u][v].is_finite())
                .map(|u| 1.0 / d[u][v])
                .sum()
        })
        .collect())
}

/// Enumerates every simple path for every ordered pair, keeps the shortest
/// ones, and credits each interior node with its share.
pub fn oracle_betweenness(g: &DenseGraph, weighted: bool) -> Result<Vec<f64>, OracleError> {
    check_size(g, MAX_BETWEENNESS_NODES)?;
    let n = g.n;
    let mut scores = vec![0.0; n];
    if n < 3 {
        return Ok(scores);
    }
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let mut paths = Vec::new();
            let mut current = vec![s];
            let mut on_path = vec![false; n];
            on_path[s] = true;
            simple_paths(g, t, weighted, 0.0, &mut current, &mut on_path, &mut paths);
            let Some(best) = paths.iter().map(|(len, _)| *len).reduce(f64::min) else {
                continue;
            };
            let shortest: Vec<&Vec<usize>> = paths
                .iter()
                .filter(|(len, _)| (len - best).abs() <= 1e-12 * best.max(1.0))
                .map(|(_, p)| p)
                .collect();
            let sigma = shortest.len() as f64;
            for path in shortest {
                for &v in &path[1..path.len() - 1] {
                    scores[v] += 1.0 / sigma;
                }
            }
        }
    }
    let scale = ((n - 1) * (n - 2)) as f64;
    Ok(scores.into_iter().map(|s| s / scale).collect())
}

fn simple_paths(
    g: &DenseGraph,
    target: usize,
    weighted: bool,
    length: f64,
    current: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<(f64, Vec<usize>)>,
) {
    let last = *current.last().unwrap();
    if last == target {
        out.push((length, current.clone()));
        return;
    }
    for next in 0..g.n {
        if g.adjacency[last][next] && !on_path[next] {
            on_path[next] = true;
            current.push(next);
            let step = g.length(last, next, weighted);
            simple_paths(g, target, weighted, length + step, current, on_path, out);
            current.pop();
            on_path[next] = false;
        }
    }
}

/// Builds the row-stochastic Google matrix explicitly and power-iterates to
/// `tol / 10` in L1.
pub fn oracle_pagerank(
    g: &DenseGraph,
    damping: f64,
    tol: f64,
    weighted: bool,
) -> Result<Vec<f64>, OracleError> {
    check_size(g, MAX_NODES)?;
    let n = g.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let nf = n as f64;
    let mut google = vec![vec![0.0; n]; n];
    for i in 0..n {
        let row_total: f64 = (0..n)
            .filter(|&j| g.adjacency[i][j])
            .map(|j| if weighted { g.weights[i][j] } else { 1.0 })
            .sum();
        for j in 0..n {
            google[i][j] = if row_total == 0.0 {
                1.0 / nf
            } else {
                let link = if g.adjacency[i][j] {
                    (if weighted { g.weights[i][j] } else { 1.0 }) / row_total
                } else {
                    0.0
                };
                damping * link + (1.0 - damping) / nf
            };
        }
    }
    let mut x = vec![1.0 / nf; n];
    for _ in 0..1_000_000 {
        let next: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| x[i] * google[i][j]).sum())
            .collect();
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change < tol / 10.0 {
            break;
        }
    }
    Ok(x)
}

/// Dense power iteration `x ← Aᵀx / ‖Aᵀx‖₂` from the uniform unit vector.
/// Returns `None` when the iterate vanishes or fails to settle within
/// `max_iter` sweeps (max-norm change below `tol`).
pub fn oracle_eigenvector(
    g: &DenseGraph,
    tol: f64,
    max_iter: usize,
    weighted: bool,
) -> Result<Option<Vec<f64>>, OracleError> {
    check_size(g, MAX_NODES)?;
    let n = g.n;
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let a = |i: usize, j: usize| match (g.adjacency[i][j], weighted) {
        (false, _) => 0.0,
        (true, false) => 1.0,
        (true, true) => g.weights[i][j],
    };
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..max_iter {
        let y: Vec<f64> = (0..n)
            .map(|v| (0..n).map(|u| a(u, v) * x[u]).sum())
            .collect();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(None);
        }
        let y: Vec<f64> = y.iter().map(|v| v / norm).collect();
        let change = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = y;
        if change < tol {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
