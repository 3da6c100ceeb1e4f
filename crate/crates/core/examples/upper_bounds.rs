//! Single-seed upper bounds, and how many gain evaluations they save when
//! they seed the lazy greedy queue.
//!
//!     cargo run --release --example upper_bounds

use hopim::bounds::upper_bounds;
use hopim::generate::power_law_digraph;
use hopim::selection::greedy_celf;
use hopim::{Bootstrap, Diffusion, HopConfig, Hops, NodeId, WeightKind, WeightModel};

pub fn run_example() -> hopim::Result<(u64, u64)> {
    let g = power_law_digraph(2_000, 10_000, 2.5, 3)?
        .apply_weight_model(&WeightModel::new(WeightKind::WeightedCascade))?;

    let b = upper_bounds(&g, 2);
    let mut top: Vec<NodeId> = g.nodes().collect();
    top.sort_by(|a, c| b.get(*c).total_cmp(&b.get(*a)));
    for &v in &top[..5] {
        println!("node {v}: bound {:.3}", b.get(v));
    }

    let cfg = HopConfig::new(Diffusion::Ic, Hops::Two);
    let plain = greedy_celf(&g, cfg, 20, Bootstrap::None, 1)?;
    let bounded = greedy_celf(&g, cfg, 20, Bootstrap::UpperBounds, 1)?;
    assert_eq!(plain.seeds, bounded.seeds);
    println!("evaluations: {} without bounds, {} with", plain.evaluations, bounded.evaluations);
    Ok((plain.evaluations, bounded.evaluations))
}

fn main() -> hopim::Result<()> {
    run_example().map(|_| ())
}
