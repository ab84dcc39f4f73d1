use crate::num::Scalar;
use crate::topology::{Projection, Topology};

use super::{CentralityError, Measure};

/// Distinct-neighbor degree over `n - 1`. Directed graphs count in- and
/// out-neighbors separately, so a node linked both ways to everyone scores 2.
pub fn degree_on<T: Scalar>(topo: &Topology<T>) -> Result<Vec<T>, CentralityError<T>> {
    let n = topo.node_count();
    if n < 2 {
        return Err(CentralityError::TooFewNodes {
            measure: Measure::Degree,
            required: 2,
            found: n,
        });
    }
    let denom = T::from_count(n - 1);
    Ok((0..n)
        .map(|v| {
            let links = match topo.projection() {
                Projection::Directed => topo.in_degree(v) + topo.out_degree(v),
                Projection::Undirected => topo.out_degree(v),
            };
            T::from_count(links) / denom
        })
        .collect())
}
