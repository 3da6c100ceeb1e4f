//! Seed selection under the linear threshold model. Weighted-cascade
//! weights sum to one at every node, so they are valid threshold weights.
//!
//!     cargo run --release --example linear_threshold

use hopim::generate::power_law_digraph;
use hopim::oracle::estimate_spread;
use hopim::selection::greedy_celf;
use hopim::{Bootstrap, Diffusion, HopConfig, Hops, WeightKind, WeightModel};

pub fn run_example() -> hopim::Result<(f64, f64)> {
    let g = power_law_digraph(1_000, 5_000, 2.5, 5)?
        .apply_weight_model(&WeightModel::new(WeightKind::WeightedCascade))?;
    assert!(g.validate_lt().is_empty());

    let cfg = HopConfig::new(Diffusion::Lt, Hops::Two);
    let r = greedy_celf(&g, cfg, 10, Bootstrap::None, 1)?;
    let mc = estimate_spread(&g, &r.seeds, Diffusion::Lt, None, 2_000, 2, 1)?;
    println!("{}: estimate {:.2}, simulated {:.2} ± {:.2}", r.algorithm, r.total_gain(), mc.mean, mc.std_error);
    Ok((r.total_gain(), mc.mean))
}

fn main() -> hopim::Result<()> {
    run_example().map(|_| ())
}
