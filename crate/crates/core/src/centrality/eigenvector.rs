use rayon::prelude::*;

use crate::num::Scalar;
use crate::topology::Topology;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenvectorResult<T> {
    /// Unit L2 norm when converged, all zero otherwise.
    pub scores: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration `x ← normalize(Aᵀ x)` from the uniform unit vector.
///
/// Converged once successive iterates differ by less than `tol` in the max
/// norm. When the iterate collapses to zero (nilpotent adjacency, e.g. a DAG)
/// or keeps oscillating (periodic structure), the result is degenerate:
/// all-zero scores with `converged == false`.
pub fn eigenvector_on<T: Scalar>(
    topo: &Topology<T>,
    tol: T,
    max_iter: usize,
    weighted: bool,
) -> EigenvectorResult<T> {
    let n = topo.node_count();
    if n == 0 {
        return EigenvectorResult {
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    let degenerate = |iterations| EigenvectorResult {
        scores: vec![T::zero(); n],
        iterations,
        converged: false,
    };

    let mut x = vec![T::from_count(n).sqrt().recip(); n];
    let mut next = vec![T::zero(); n];
    for iteration in 1..=max_iter {
        next.par_iter_mut().enumerate().for_each(|(v, slot)| {
            let (sources, weights) = topo.in_arcs(v);
            *slot = sources
                .iter()
                .zip(weights)
                .fold(T::zero(), |acc, (&u, &w)| {
                    acc + if weighted {
                        w * x[u as usize]
                    } else {
                        x[u as usize]
                    }
                });
        });
        let norm = next.iter().fold(T::zero(), |acc, &y| acc + y * y).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return degenerate(iteration);
        }
        let mut change = T::zero();
        for (y, &old) in next.iter_mut().zip(&x) {
            *y = *y / norm;
            change = change.max((*y - old).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if change < tol {
            return EigenvectorResult {
                scores: x,
                iterations: iteration,
                converged: true,
            };
        }
    }
    degenerate(max_iter)
}
