//! Brandes' dependency accumulation.
//!
//! Sources are processed in fixed blocks of [`BLOCK`] nodes; each block sums
//! into its own buffer and the buffers are added in block order. The
//! partition does not depend on the rayon pool size, so neither does any
//! rounding.

use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::num::Scalar;
use crate::topology::Topology;

use super::distance::HeapEntry;

const BLOCK: usize = 32;
const BLOCKS_PER_WAVE: usize = 64;

/// Normalized betweenness: `Σ_{s≠v≠t} σ_st(v)/σ_st / ((n-1)(n-2))`.
///
/// Unweighted runs BFS; weighted runs Dijkstra with arc length `1 / weight`.
/// Graphs with fewer than three nodes score zero everywhere.
pub fn betweenness_on<T: Scalar>(topo: &Topology<T>, weighted: bool) -> Vec<T> {
    let n = topo.node_count();
    if n < 3 {
        if n > 0 {
            log::warn!("betweenness is zero by convention on graphs with {n} nodes");
        }
        return vec![T::zero(); n];
    }

    let block_starts: Vec<usize> = (0..n).step_by(BLOCK).collect();
    let mut total = vec![T::zero(); n];
    for wave in block_starts.chunks(BLOCKS_PER_WAVE) {
        let partials: Vec<Vec<T>> = wave
            .par_iter()
            .map(|&start| {
                let mut scratch = Scratch::new(n);
                let mut acc = vec![T::zero(); n];
                for source in start..(start + BLOCK).min(n) {
                    if weighted {
                        scratch.dijkstra(topo, source);
                    } else {
                        scratch.bfs(topo, source);
                    }
                    scratch.accumulate(topo, source, weighted, &mut acc);
                }
                acc
            })
            .collect();
        for partial in partials {
            for (t, p) in total.iter_mut().zip(partial) {
                *t = *t + p;
            }
        }
    }

    let scale = T::from_count(n - 1) * T::from_count(n - 2);
    total.into_iter().map(|b| b / scale).collect()
}

struct Scratch<T> {
    hops: Vec<u32>,
    dist: Vec<T>,
    sigma: Vec<T>,
    delta: Vec<T>,
    /// Nodes in non-decreasing distance from the source.
    order: Vec<u32>,
    queue: VecDeque<u32>,
    heap: BinaryHeap<HeapEntry<T>>,
}

const UNSEEN: u32 = u32::MAX;

impl<T: Scalar> Scratch<T> {
    fn new(n: usize) -> Self {
        Scratch {
            hops: vec![UNSEEN; n],
            dist: vec![T::infinity(); n],
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
            order: Vec::new(),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            let v = v as usize;
            self.hops[v] = UNSEEN;
            self.dist[v] = T::infinity();
            self.sigma[v] = T::zero();
            self.delta[v] = T::zero();
        }
        self.order.clear();
    }

    fn bfs(&mut self, topo: &Topology<T>, source: usize) {
        self.reset();
        self.hops[source] = 0;
        self.sigma[source] = T::one();
        self.queue.push_back(source as u32);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let v = v as usize;
            let next = self.hops[v] + 1;
            let sigma_v = self.sigma[v];
            for &w in topo.out_arcs(v).0 {
                let w = w as usize;
                if self.hops[w] == UNSEEN {
                    self.hops[w] = next;
                    self.queue.push_back(w as u32);
                }
                if self.hops[w] == next {
                    self.sigma[w] = self.sigma[w] + sigma_v;
                }
            }
        }
    }

    /// Every node given a finite distance is eventually settled, so `order`
    /// also lists everything `reset` has to clear.
    fn dijkstra(&mut self, topo: &Topology<T>, source: usize) {
        self.reset();
        // hops doubles as the "settled" mark
        self.dist[source] = T::zero();
        self.sigma[source] = T::one();
        self.heap.push(HeapEntry {
            dist: T::zero(),
            node: source as u32,
        });
        while let Some(HeapEntry { dist, node }) = self.heap.pop() {
            let v = node as usize;
            if self.hops[v] != UNSEEN || dist > self.dist[v] {
                continue;
            }
            self.hops[v] = 0;
            self.order.push(node);
            let sigma_v = self.sigma[v];
            let (targets, weights) = topo.out_arcs(v);
            for (&w, &weight) in targets.iter().zip(weights) {
                let w = w as usize;
                if self.hops[w] != UNSEEN {
                    continue;
                }
                let candidate = dist + weight.recip();
                if candidate < self.dist[w] {
                    self.dist[w] = candidate;
                    self.sigma[w] = sigma_v;
                    self.heap.push(HeapEntry {
                        dist: candidate,
                        node: w as u32,
                    });
                } else if candidate == self.dist[w] {
                    self.sigma[w] = self.sigma[w] + sigma_v;
                }
            }
        }
    }

    fn accumulate(&mut self, topo: &Topology<T>, source: usize, weighted: bool, acc: &mut [T]) {
        for &w in self.order.iter().rev() {
            let w = w as usize;
            let coeff = (T::one() + self.delta[w]) / self.sigma[w];
            let (preds, weights) = topo.in_arcs(w);
            for (&v, &weight) in preds.iter().zip(weights) {
                let v = v as usize;
                let on_shortest_path = if weighted {
                    self.hops[v] != UNSEEN && self.dist[v] + weight.recip() == self.dist[w]
                } else {
                    self.hops[v] != UNSEEN && self.hops[v] + 1 == self.hops[w]
                };
                if on_shortest_path {
                    self.delta[v] = self.delta[v] + self.sigma[v] * coeff;
                }
            }
            if w != source {
                acc[w] = acc[w] + self.delta[w];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qr::{EdgeData, QrGraph};
    use crate::topology::Projection;
    use crate::UserId;

    fn bc(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
        let g = QrGraph::from_index_edges(n, edges).unwrap();
        betweenness_on(&Topology::new(&g, Projection::Directed), false)
    }

    #[test]
    fn path_and_cycle() {
        assert_eq!(bc(3, &[(0, 1), (1, 2)]), vec![0.0, 0.5, 0.0]);
        assert_eq!(bc(3, &[(0, 1), (1, 2), (2, 0)]), vec![0.5; 3]);
    }

    #[test]
    fn edgeless_and_tiny() {
        assert_eq!(bc(4, &[]), vec![0.0; 4]);
        assert_eq!(bc(2, &[(0, 1), (1, 0)]), vec![0.0; 2]);
    }

    #[test]
    fn split_paths_share_credit() {
        // 0 -> {1, 2} -> 3: two shortest paths, each middle node gets half
        let scores = bc(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(scores, vec![0.0, 0.5 / 6.0, 0.5 / 6.0, 0.0]);
    }

    #[test]
    fn blocks_cover_more_than_one_wave() {
        // a long directed path exercises several blocks
        let n = BLOCK * 3 + 5;
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let scores = bc(n, &edges);
        let scale = ((n - 1) * (n - 2)) as f64;
        for (v, s) in scores.iter().enumerate() {
            let expected = (v * (n - 1 - v)) as f64 / scale;
            assert!((s - expected).abs() < 1e-15, "node {v}");
        }
    }

    #[test]
    fn weighted_prefers_heavier_route() {
        // direct 0->2 has length 1/0.25 = 4; detour through 1 has length 2
        let unit = |w: f64| EdgeData {
            weight: w,
            interaction_count: 1,
        };
        let g = QrGraph::from_edges(
            [],
            [
                (UserId(0), UserId(2), unit(0.25)),
                (UserId(0), UserId(1), unit(1.0)),
                (UserId(1), UserId(2), unit(1.0)),
            ],
            0.01,
        )
        .unwrap();
        let topo = Topology::new(&g, Projection::Directed);
        assert_eq!(betweenness_on(&topo, false), vec![0.0; 3]);
        assert_eq!(betweenness_on(&topo, true), vec![0.0, 0.5, 0.0]);
    }
}
