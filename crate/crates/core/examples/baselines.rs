//! HighDegree and DegreeDiscount against the hop-based greedy, scored with
//! the same simulations.
//!
//!     cargo run --release --example baselines

use hopim::generate::power_law_digraph;
use hopim::oracle::estimate_spread;
use hopim::selection::{degree_discount, greedy_celf, high_degree, DegreeKind};
use hopim::{Bootstrap, Diffusion, HopConfig, Hops, WeightKind, WeightModel};

pub fn run_example() -> hopim::Result<Vec<(String, f64)>> {
    let g = power_law_digraph(2_000, 10_000, 2.5, 9)?
        .apply_weight_model(&WeightModel::new(WeightKind::Trivalency { seed: 9 }))?;
    let k = 10;
    let runs = [
        high_degree(&g, k, DegreeKind::Out)?,
        degree_discount(&g, k, 0.01)?,
        greedy_celf(&g, HopConfig::new(Diffusion::Ic, Hops::One), k, Bootstrap::UpperBounds, 1)?,
        greedy_celf(&g, HopConfig::new(Diffusion::Ic, Hops::Two), k, Bootstrap::UpperBounds, 1)?,
    ];
    let mut scores = Vec::new();
    for r in &runs {
        let mc = estimate_spread(&g, &r.seeds, Diffusion::Ic, None, 2_000, 4, 1)?;
        println!("{:>15}: {:.2} ± {:.2}  ({:.4}s)", r.algorithm, mc.mean, mc.std_error, r.elapsed);
        scores.push((r.algorithm.clone(), mc.mean));
    }
    Ok(scores)
}

fn main() -> hopim::Result<()> {
    run_example().map(|_| ())
}
