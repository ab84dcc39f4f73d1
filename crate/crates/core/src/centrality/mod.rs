//! Node centrality measures on a [`QrGraph`].
//!
//! All measures run on the unweighted directed structure unless
//! [`CentralityOptions`] asks otherwise:
//!
//! | measure     | definition                                              | range     |
//! |-------------|---------------------------------------------------------|-----------|
//! | degree      | `(in + out) / (n - 1)` over distinct neighbors          | `[0, 2]`  |
//! | betweenness | Brandes, normalized by `(n - 1)(n - 2)`                 | `[0, 1]`  |
//! | closeness   | `(k / S) * (k / (n - 1))` over the `k` nodes reaching v | `[0, 1]`  |
//! | pagerank    | damped walk, uniform teleport and dangling mass         | sums to 1 |
//! | eigenvector | dominant vector of `x(v) ∝ Σ_{u→v} x(u)`, unit L2 norm  | `[0, 1]`  |
//! | harmonic    | `Σ_{u reaches v} 1 / d(u, v)`, unnormalized             | `≥ 0`     |
//!
//! Closeness and harmonic use incoming distances. With `weighted` set, path
//! lengths become `1 / weight` and walk transitions become proportional to
//! weight; degree always counts neighbors.
//!
//! Kernels parallelize over nodes with rayon. Results are bit-identical for
//! any thread count.

mod betweenness;
mod degree;
mod distance;
mod eigenvector;
mod pagerank;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use betweenness::betweenness_on;
pub use degree::degree_on;
pub use distance::{all_pairs_hop_distances, closeness_harmonic_on, HopDistances};
pub use eigenvector::{eigenvector_on, EigenvectorResult};
pub use pagerank::{pagerank_on, PageRankResult};

use crate::ids::UserId;
use crate::num::Scalar;
use crate::qr::QrGraph;
use crate::topology::{Projection, Topology};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CentralityError<T: std::fmt::Debug> {
    #[error("{measure} centrality needs at least {required} nodes, graph has {found}")]
    TooFewNodes {
        measure: Measure,
        required: usize,
        found: usize,
    },
    #[error("damping factor must lie strictly between 0 and 1, got {0}")]
    InvalidDamping(f64),
    #[error("pagerank did not converge after {iterations} iterations (L1 residual {residual:e})")]
    PageRankNotConverged {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<T>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Degree,
    Betweenness,
    Closeness,
    #[serde(rename = "pagerank")]
    PageRank,
    Eigenvector,
    Harmonic,
}

impl Measure {
    /// Column order of `centrality.csv`.
    pub const ALL: [Measure; 6] = [
        Measure::Degree,
        Measure::Betweenness,
        Measure::Closeness,
        Measure::PageRank,
        Measure::Eigenvector,
        Measure::Harmonic,
    ];

    /// Row and column order of the correlation matrix.
    pub const CORRELATION_ORDER: [Measure; 6] = [
        Measure::Degree,
        Measure::Betweenness,
        Measure::PageRank,
        Measure::Closeness,
        Measure::Harmonic,
        Measure::Eigenvector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::PageRank => "pagerank",
            Measure::Eigenvector => "eigenvector",
            Measure::Harmonic => "harmonic",
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralityOptions<T> {
    pub projection: Projection,
    pub weighted: bool,
    pub damping: T,
    pub pagerank_tol: T,
    pub pagerank_max_iter: usize,
    pub eigenvector_tol: T,
    pub eigenvector_max_iter: usize,
}

impl<T: Scalar> Default for CentralityOptions<T> {
    fn default() -> Self {
        CentralityOptions {
            projection: Projection::Directed,
            weighted: false,
            damping: T::from_f64_lossy(0.85),
            pagerank_tol: T::from_f64_lossy(1e-9),
            pagerank_max_iter: 1000,
            eigenvector_tol: T::from_f64_lossy(1e-9),
            eigenvector_max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceInfo {
    pub pagerank_iterations: usize,
    pub pagerank_converged: bool,
    pub pagerank_residual: f64,
    pub eigenvector_iterations: usize,
    pub eigenvector_converged: bool,
}

/// Per-node scores for all six measures, nodes in ascending id order.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityTable<T> {
    pub nodes: Vec<UserId>,
    pub degree: Vec<T>,
    pub betweenness: Vec<T>,
    pub closeness: Vec<T>,
    pub pagerank: Vec<T>,
    pub eigenvector: Vec<T>,
    pub harmonic: Vec<T>,
    pub convergence: ConvergenceInfo,
}

impl<T: Scalar> CentralityTable<T> {
    /// Computes every measure.
    ///
    /// Never fails on graph shape: degree is all-zero below two nodes,
    /// betweenness below three, and a PageRank that does not converge keeps
    /// its last iterate with `convergence.pagerank_converged == false`.
    pub fn compute(
        graph: &QrGraph<T>,
        options: &CentralityOptions<T>,
    ) -> Result<Self, CentralityError<T>> {
        check_damping(options.damping)?;
        let topo = Topology::new(graph, options.projection);
        let n = topo.node_count();

        let degree = degree_on(&topo).unwrap_or_else(|_| vec![T::zero(); n]);
        let betweenness = betweenness_on(&topo, options.weighted);
        let (closeness, harmonic) = closeness_harmonic_on(&topo, options.weighted);
        let mut convergence = ConvergenceInfo::default();
        let pagerank = match pagerank_on(
            &topo,
            options.damping,
            options.pagerank_tol,
            options.pagerank_max_iter,
            options.weighted,
        ) {
            Ok(result) => {
                convergence.pagerank_iterations = result.iterations;
                convergence.pagerank_converged = true;
                convergence.pagerank_residual = result.residual.to_f64_lossy();
                result.scores
            }
            Err(CentralityError::PageRankNotConverged {
                iterations,
                residual,
                last_iterate,
            }) => {
                log::warn!("pagerank stopped after {iterations} iterations, residual {residual:e}");
                convergence.pagerank_iterations = iterations;
                convergence.pagerank_residual = residual;
                last_iterate
            }
            Err(other) => return Err(other),
        };
        let eigen = eigenvector_on(
            &topo,
            options.eigenvector_tol,
            options.eigenvector_max_iter,
            options.weighted,
        );
        convergence.eigenvector_iterations = eigen.iterations;
        convergence.eigenvector_converged = eigen.converged;

        Ok(CentralityTable {
            nodes: graph.nodes().to_vec(),
            degree,
            betweenness,
            closeness,
            pagerank,
            eigenvector: eigen.scores,
            harmonic,
            convergence,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn scores(&self, measure: Measure) -> &[T] {
        match measure {
            Measure::Degree => &self.degree,
            Measure::Betweenness => &self.betweenness,
            Measure::Closeness => &self.closeness,
            Measure::PageRank => &self.pagerank,
            Measure::Eigenvector => &self.eigenvector,
            Measure::Harmonic => &self.harmonic,
        }
    }
}

fn check_damping<T: Scalar>(damping: T) -> Result<(), CentralityError<T>> {
    if damping > T::zero() && damping < T::one() {
        Ok(())
    } else {
        Err(CentralityError::InvalidDamping(damping.to_f64_lossy()))
    }
}

fn directed<T: Scalar>(graph: &QrGraph<T>) -> Topology<T> {
    Topology::new(graph, Projection::Directed)
}

/// `(in_degree + out_degree) / (n - 1)` on the directed graph.
pub fn degree_centrality<T: Scalar>(graph: &QrGraph<T>) -> Result<Vec<T>, CentralityError<T>> {
    degree_on(&directed(graph))
}

/// Exact directed, unweighted betweenness, normalized by `(n - 1)(n - 2)`.
pub fn betweenness_centrality<T: Scalar>(graph: &QrGraph<T>) -> Vec<T> {
    betweenness_on(&directed(graph), false)
}

pub fn closeness_centrality<T: Scalar>(graph: &QrGraph<T>) -> Vec<T> {
    closeness_harmonic_on(&directed(graph), false).0
}

pub fn harmonic_centrality<T: Scalar>(graph: &QrGraph<T>) -> Vec<T> {
    closeness_harmonic_on(&directed(graph), false).1
}

pub fn pagerank<T: Scalar>(
    graph: &QrGraph<T>,
    damping: T,
    tol: T,
    max_iter: usize,
) -> Result<PageRankResult<T>, CentralityError<T>> {
    check_damping(damping)?;
    pagerank_on(&directed(graph), damping, tol, max_iter, false)
}

pub fn eigenvector_centrality<T: Scalar>(
    graph: &QrGraph<T>,
    tol: T,
    max_iter: usize,
) -> EigenvectorResult<T> {
    eigenvector_on(&directed(graph), tol, max_iter, false)
}
