use rayon::prelude::*;

use crate::num::Scalar;
use crate::topology::Topology;

use super::CentralityError;

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankResult<T> {
    pub scores: Vec<T>,
    pub iterations: usize,
    /// L1 change of the final sweep.
    pub residual: T,
}

/// Power iteration on the damped random walk.
///
/// Each sweep computes, for every node `v`,
/// `(1 - d) / n + d * D / n + d * Σ_{u→v} x(u) p(u, v)` where `D` is the
/// mass sitting on dangling nodes and `p(u, v)` is `1 / outdeg(u)`, or
/// `w(u, v) / Σ_w w(u, ·)` when `weighted`. Stops once the L1 change drops
/// below `tol`.
pub fn pagerank_on<T: Scalar>(
    topo: &Topology<T>,
    damping: T,
    tol: T,
    max_iter: usize,
    weighted: bool,
) -> Result<PageRankResult<T>, CentralityError<T>> {
    let n = topo.node_count();
    if n == 0 {
        return Ok(PageRankResult {
            scores: Vec::new(),
            iterations: 0,
            residual: T::zero(),
        });
    }
    let n_t = T::from_count(n);
    // 1 / (out-degree or out-weight); zero marks a dangling node
    let inv_out: Vec<T> = (0..n)
        .map(|u| {
            let (targets, weights) = topo.out_arcs(u);
            let total = if weighted {
                weights.iter().fold(T::zero(), |acc, &w| acc + w)
            } else {
                T::from_count(targets.len())
            };
            if targets.is_empty() {
                T::zero()
            } else {
                total.recip()
            }
        })
        .collect();
    let dangling: Vec<usize> = (0..n).filter(|&u| topo.out_degree(u) == 0).collect();

    let mut x = vec![n_t.recip(); n];
    let mut next = vec![T::zero(); n];
    let mut residual = T::infinity();
    for iteration in 1..=max_iter {
        let dangling_mass = dangling.iter().fold(T::zero(), |acc, &u| acc + x[u]);
        let base = (T::one() - damping) / n_t + damping * dangling_mass / n_t;
        next.par_iter_mut().enumerate().for_each(|(v, slot)| {
            let (sources, weights) = topo.in_arcs(v);
            let mut inflow = T::zero();
            for (&u, &w) in sources.iter().zip(weights) {
                let u = u as usize;
                let share = if weighted { w * inv_out[u] } else { inv_out[u] };
                inflow = inflow + x[u] * share;
            }
            *slot = base + damping * inflow;
        });
        residual = x
            .iter()
            .zip(&next)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b).abs());
        std::mem::swap(&mut x, &mut next);
        if residual < tol {
            return Ok(PageRankResult {
                scores: x,
                iterations: iteration,
                residual,
            });
        }
    }
    Err(CentralityError::PageRankNotConverged {
        iterations: max_iter,
        residual: residual.to_f64_lossy(),
        last_iterate: x,
    })
}
