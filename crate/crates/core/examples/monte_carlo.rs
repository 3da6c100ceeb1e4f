//! Compare the hop estimators with exact and simulated spread, hop limit by
//! hop limit.
//!
//!     cargo run --release --example monte_carlo

use hopim::oracle::{estimate_spread, exact_spread};
use hopim::{Diffusion, Graph, HopState, Hops, NodeId};

pub fn run_example() -> hopim::Result<Vec<f64>> {
    // a short chain with a shortcut and a back edge
    let g = Graph::from_edges(
        6,
        &[(0, 1, 0.6), (1, 2, 0.6), (2, 3, 0.6), (3, 4, 0.6), (0, 2, 0.3), (4, 5, 0.6), (5, 1, 0.2)],
    )?;
    let seeds = [NodeId(0)];

    let mut exact = Vec::new();
    for h in [Some(0), Some(1), Some(2), Some(3), None] {
        let e = exact_spread(&g, &seeds, Diffusion::Ic, h)?;
        let mc = estimate_spread(&g, &seeds, Diffusion::Ic, h, 20_000, 11, 1)?;
        let label = h.map_or("unlimited".to_string(), |h| h.to_string());
        println!("hop limit {label:>9}: exact {e:.4}  simulated {:.4} ± {:.4}", mc.mean, mc.std_error);
        exact.push(e);
    }

    for hops in [Hops::One, Hops::Two] {
        let mut s = HopState::new(&g, Diffusion::Ic, hops)?;
        s.add_seed(&g, NodeId(0))?;
        println!("{}-hop estimate: {:.4}", hops.get(), s.spread());
    }
    Ok(exact)
}

fn main() -> hopim::Result<()> {
    run_example().map(|_| ())
}
