//! Incremental one- and two-hop spread under the independent cascade model,
//! on a three-node graph where the numbers can be checked by hand.
//!
//!     cargo run --example hop_estimation

use hopim::{Diffusion, Graph, HopState, Hops, NodeId};

pub fn run_example() -> hopim::Result<(f64, f64)> {
    // 0 -> 1 -> 2 and 0 -> 2, every edge with p = 0.5
    let g = Graph::from_edges(3, &[(0, 1, 0.5), (1, 2, 0.5), (0, 2, 0.5)])?;

    let mut one = HopState::new(&g, Diffusion::Ic, Hops::One)?;
    let mut two = HopState::new(&g, Diffusion::Ic, Hops::Two)?;
    let report = two.eval_gain(&g, NodeId(0))?;
    println!("two-hop gain of node 0 before committing: {}", report.gain);
    two.commit(&g, report)?;
    one.add_seed(&g, NodeId(0))?;

    for v in g.nodes() {
        println!("node {v}: one-hop {:.4}  two-hop {:.4}", one.pi(v), two.pi(v));
    }
    println!("spread: one-hop {}  two-hop {}", one.spread(), two.spread());
    Ok((one.spread(), two.spread()))
}

fn main() -> hopim::Result<()> {
    run_example().map(|_| ())
}
