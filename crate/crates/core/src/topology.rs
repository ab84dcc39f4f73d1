//! Compressed adjacency used by the centrality kernels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::num::Scalar;
use crate::qr::QrGraph;

/// How edge direction is treated when computing metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    #[default]
    Directed,
    /// Every edge is usable both ways. Antiparallel edges collapse into one
    /// link whose weight is their sum.
    Undirected,
}

#[derive(Debug, Clone)]
struct Csr<T> {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<T>,
}

impl<T: Scalar> Csr<T> {
    fn from_sorted(n: usize, adjacency: &BTreeMap<(u32, u32), T>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(src, _) in adjacency.keys() {
            offsets[src as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = adjacency.keys().map(|&(_, dst)| dst).collect();
        let weights = adjacency.values().copied().collect();
        Csr {
            offsets,
            targets,
            weights,
        }
    }

    #[inline]
    fn row(&self, v: usize) -> (&[u32], &[T]) {
        let range = self.offsets[v]..self.offsets[v + 1];
        (&self.targets[range.clone()], &self.weights[range])
    }
}

/// Index-based view of a [`QrGraph`]: node `i` is `graph.nodes()[i]`.
/// Neighbor lists are sorted by index.
#[derive(Debug, Clone)]
pub struct Topology<T> {
    n: usize,
    projection: Projection,
    out: Csr<T>,
    inc: Csr<T>,
}

impl<T: Scalar> Topology<T> {
    pub fn new(graph: &QrGraph<T>, projection: Projection) -> Self {
        let n = graph.node_count();
        let index = |id| graph.node_index(id).expect("edge endpoint is a node") as u32;
        let mut forward = BTreeMap::new();
        for (src, dst, data) in graph.edges() {
            let (s, d) = (index(src), index(dst));
            let slot = forward.entry((s, d)).or_insert_with(T::zero);
            *slot = *slot + data.weight;
            if projection == Projection::Undirected {
                let slot = forward.entry((d, s)).or_insert_with(T::zero);
                *slot = *slot + data.weight;
            }
        }
        let backward: BTreeMap<(u32, u32), T> =
            forward.iter().map(|(&(s, d), &w)| ((d, s), w)).collect();
        Topology {
            n,
            projection,
            out: Csr::from_sorted(n, &forward),
            inc: Csr::from_sorted(n, &backward),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of directed arcs (twice the link count when undirected).
    pub fn arc_count(&self) -> usize {
        self.out.targets.len()
    }

    pub fn projection(&self) -> Projection {
        self.projection
    }

    /// Successors of `v` with arc weights.
    #[inline]
    pub fn out_arcs(&self, v: usize) -> (&[u32], &[T]) {
        self.out.row(v)
    }

    /// Predecessors of `v` with arc weights.
    #[inline]
    pub fn in_arcs(&self, v: usize) -> (&[u32], &[T]) {
        self.inc.row(v)
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out.offsets[v + 1] - self.out.offsets[v]
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.inc.offsets[v + 1] - self.inc.offsets[v]
    }
}
