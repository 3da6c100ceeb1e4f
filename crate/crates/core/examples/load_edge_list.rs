//! Load an edge list with sparse ids, attach weighted-cascade probabilities
//! and look nodes up by their original ids.
//!
//!     cargo run --example load_edge_list

use std::io::Cursor;

use hopim::graph::load_edge_list;
use hopim::{Graph, WeightKind, WeightModel};

const EDGES: &str = "\
# follower graph, ids as they appear in the source data
10 20
10 30
20 30
30 10
40 30
";

pub fn run_example() -> hopim::Result<Graph> {
    let g = load_edge_list(Cursor::new(EDGES))?;
    let g = g.apply_weight_model(&WeightModel::new(WeightKind::WeightedCascade))?;
    println!("{} nodes, {} edges", g.node_count(), g.edge_count());
    for (u, v, p) in g.edges() {
        println!("  {} -> {}  p = {:.3}", g.label(u), g.label(v), p);
    }
    let thirty = g.node_by_label(30).expect("30 is in the file");
    println!("node 30 has in-degree {} and in-weight {}", g.in_degree(thirty), g.in_weight(thirty));
    Ok(g)
}

fn main() -> hopim::Result<()> {
    run_example().map(|_| ())
}
