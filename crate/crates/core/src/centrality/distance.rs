//! Shortest-path distances and the two distance-based measures.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::num::Scalar;
use crate::qr::QrGraph;
use crate::topology::{Projection, Topology};

/// Dense all-pairs hop distances. `O(n²)` memory; meant for small graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopDistances {
    n: usize,
    hops: Vec<u32>,
}

const UNREACHED: u32 = u32::MAX;

impl HopDistances {
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Hop count from `from` to `to` by node index, `None` when unreachable.
    /// `get(v, v)` is `Some(0)`.
    pub fn get(&self, from: usize, to: usize) -> Option<u32> {
        let d = self.hops[from * self.n + to];
        (d != UNREACHED).then_some(d)
    }
}

/// BFS over out-edges from every node.
pub fn all_pairs_hop_distances<T: Scalar>(graph: &QrGraph<T>) -> HopDistances {
    let topo = Topology::new(graph, Projection::Directed);
    let n = topo.node_count();
    let mut hops = vec![UNREACHED; n * n];
    hops.par_chunks_mut(n.max(1))
        .enumerate()
        .for_each(|(source, row)| {
            let mut queue = VecDeque::new();
            row[source] = 0;
            queue.push_back(source);
            while let Some(v) = queue.pop_front() {
                for &w in topo.out_arcs(v).0 {
                    let w = w as usize;
                    if row[w] == UNREACHED {
                        row[w] = row[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        });
    HopDistances { n, hops }
}

/// Closeness and harmonic centrality from incoming distances.
///
/// For each target `v`, with `k` nodes reaching it at total distance `S`:
/// closeness is `(k / S) * (k / (n - 1))` (zero when `k = 0`) and harmonic is
/// `Σ 1 / d(u, v)`. Hop counts unless `weighted`, where an arc of weight `w`
/// has length `1 / w`.
pub fn closeness_harmonic_on<T: Scalar>(topo: &Topology<T>, weighted: bool) -> (Vec<T>, Vec<T>) {
    let n = topo.node_count();
    let per_node: Vec<(T, T)> = (0..n)
        .into_par_iter()
        .map_init(
            || Search::new(n),
            |search, target| {
                let reach = if weighted {
                    search.incoming_weighted(topo, target)
                } else {
                    search.incoming_hops(topo, target)
                };
                let closeness = if reach.count == 0 {
                    T::zero()
                } else {
                    let k = T::from_count(reach.count);
                    (k / reach.total) * (k / T::from_count(n - 1))
                };
                (closeness, reach.harmonic)
            },
        )
        .collect();
    per_node.into_iter().unzip()
}

struct Reach<T> {
    count: usize,
    total: T,
    harmonic: T,
}

struct Search<T> {
    hops: Vec<u32>,
    dist: Vec<T>,
    settled: Vec<bool>,
    visited: Vec<u32>,
    queue: VecDeque<u32>,
    level_counts: Vec<usize>,
    heap: BinaryHeap<HeapEntry<T>>,
}

impl<T: Scalar> Search<T> {
    fn new(n: usize) -> Self {
        Search {
            hops: vec![UNREACHED; n],
            dist: vec![T::infinity(); n],
            settled: vec![false; n],
            visited: Vec::new(),
            queue: VecDeque::new(),
            level_counts: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.visited {
            self.hops[v as usize] = UNREACHED;
            self.dist[v as usize] = T::infinity();
            self.settled[v as usize] = false;
        }
        self.visited.clear();
        self.level_counts.clear();
    }

    /// Reverse BFS. Distances are tallied per level so the sums are exact
    /// integers until the final divisions.
    fn incoming_hops(&mut self, topo: &Topology<T>, target: usize) -> Reach<T> {
        self.reset();
        self.hops[target] = 0;
        self.visited.push(target as u32);
        self.queue.push_back(target as u32);
        while let Some(v) = self.queue.pop_front() {
            let v = v as usize;
            let next = self.hops[v] + 1;
            for &u in topo.in_arcs(v).0 {
                let u = u as usize;
                if self.hops[u] == UNREACHED {
                    self.hops[u] = next;
                    self.visited.push(u as u32);
                    self.queue.push_back(u as u32);
                    let level = next as usize;
                    if self.level_counts.len() <= level {
                        self.level_counts.resize(level + 1, 0);
                    }
                    self.level_counts[level] += 1;
                }
            }
        }
        let mut count = 0usize;
        let mut total = 0u64;
        let mut harmonic = T::zero();
        for (level, &c) in self.level_counts.iter().enumerate().skip(1) {
            count += c;
            total += (level * c) as u64;
            harmonic = harmonic + T::from_count(c) / T::from_count(level);
        }
        Reach {
            count,
            total: T::from_f64_lossy(total as f64),
            harmonic,
        }
    }

    fn incoming_weighted(&mut self, topo: &Topology<T>, target: usize) -> Reach<T> {
        self.reset();
        self.dist[target] = T::zero();
        self.visited.push(target as u32);
        self.heap.push(HeapEntry {
            dist: T::zero(),
            node: target as u32,
        });
        let mut reach = Reach {
            count: 0,
            total: T::zero(),
            harmonic: T::zero(),
        };
        while let Some(HeapEntry { dist, node }) = self.heap.pop() {
            let v = node as usize;
            if self.settled[v] || dist > self.dist[v] {
                continue;
            }
            self.settled[v] = true;
            if v != target {
                reach.count += 1;
                reach.total = reach.total + dist;
                reach.harmonic = reach.harmonic + dist.recip();
            }
            let (sources, weights) = topo.in_arcs(v);
            for (&u, &weight) in sources.iter().zip(weights) {
                let u = u as usize;
                let candidate = dist + weight.recip();
                if candidate < self.dist[u] {
                    if self.dist[u].is_infinite() {
                        self.visited.push(u as u32);
                    }
                    self.dist[u] = candidate;
                    self.heap.push(HeapEntry {
                        dist: candidate,
                        node: u as u32,
                    });
                }
            }
        }
        reach
    }
}

/// Min-heap entry ordered by `(dist, node)`.
pub(super) struct HeapEntry<T> {
    pub dist: T,
    pub node: u32,
}

impl<T: Scalar> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for HeapEntry<T> {}

impl<T: Scalar> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for HeapEntry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}
