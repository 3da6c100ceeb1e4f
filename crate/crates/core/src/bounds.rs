//! Single-seed upper bounds on hop-limited spread.
//!
//! `bound_0(v) = 1` and `bound_h(v) = 1 + sum over w in N_v of p(v,w) * bound_{h-1}(w)`.
//! Each level is one linear pass over the out-adjacency. At one hop the bound
//! is the exact single-seed spread; at two hops it dominates it.

use rayon::prelude::*;

use crate::graph::{Graph, NodeId};

#[derive(Clone, Debug, PartialEq)]
pub struct UpperBounds {
    pub hops: u32,
    pub values: Vec<f64>,
}

impl UpperBounds {
    pub fn get(&self, v: NodeId) -> f64 {
        self.values[v.index()]
    }
}

/// Bounds for every node at hop limit `hops` (any `hops >= 0`).
pub fn upper_bounds(g: &Graph, hops: u32) -> UpperBounds {
    let mut level = vec![1.0; g.node_count()];
    for _ in 0..hops {
        let prev = level;
        level = (0..g.node_count())
            .into_par_iter()
            .map(|v| 1.0 + g.out_edges(NodeId(v as u32)).map(|(w, p)| p * prev[w.index()]).sum::<f64>())
            .collect();
    }
    UpperBounds { hops, values: level }
}
