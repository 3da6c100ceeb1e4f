//! Approximation lower bound of the one-hop greedy on scale-free graphs,
//! over a grid of propagation probabilities and seed ratios.
//!
//!     cargo run --release --example alpha_surface

use hopim::analysis::{
    alpha_lower_bound, alpha_surface, guarantee_factor, linspace, solve_expected_fraction, write_surface_csv,
    ScaleFreeParams,
};

pub fn run_example() -> hopim::Result<f64> {
    let params = ScaleFreeParams::new(3.0, 0.05, 0.1);
    let alpha = alpha_lower_bound(&params)?;
    let fixed = solve_expected_fraction(&params)?;
    println!("gamma 3, p 0.05, 10% seeds: alpha >= {alpha:.5}, guarantee {:.5}", guarantee_factor(alpha));
    println!("expected active fraction {:.5} after {} iterations", fixed.phi, fixed.iterations);

    let points = alpha_surface(3.0, &linspace(0.0, 0.1, 3), &linspace(0.1, 0.5, 3), 100_000)?;
    write_surface_csv(&points, std::io::stdout().lock())?;
    Ok(alpha)
}

fn main() -> hopim::Result<()> {
    run_example().map(|_| ())
}
