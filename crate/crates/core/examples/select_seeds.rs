//! Pick seeds on a synthetic power-law graph with the two-hop greedy and
//! check the result with Monte-Carlo simulation.
//!
//!     cargo run --release --example select_seeds

use hopim::generate::power_law_digraph;
use hopim::oracle::estimate_spread;
use hopim::selection::greedy_celf;
use hopim::{Bootstrap, Diffusion, HopConfig, Hops, SeedResult, WeightKind, WeightModel};

pub fn run_example() -> hopim::Result<SeedResult> {
    let g = power_law_digraph(2_000, 10_000, 2.5, 7)?
        .apply_weight_model(&WeightModel::new(WeightKind::WeightedCascade))?;
    let cfg = HopConfig::new(Diffusion::Ic, Hops::Two);
    let result = greedy_celf(&g, cfg, 10, Bootstrap::UpperBounds, 1)?;

    println!("{} picked {:?}", result.algorithm, result.seeds.iter().map(|s| s.0).collect::<Vec<_>>());
    println!("two-hop spread {:.2} in {:.3}s with {} evaluations", result.total_gain(), result.elapsed, result.evaluations);
    let mc = estimate_spread(&g, &result.seeds, Diffusion::Ic, None, 2_000, 1, 1)?;
    println!("simulated spread {:.2} ± {:.2}", mc.mean, mc.std_error);
    Ok(result)
}

fn main() -> hopim::Result<()> {
    run_example().map(|_| ())
}
