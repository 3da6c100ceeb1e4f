// Runs every example end to end and checks what it returns.

#[allow(dead_code)]
#[path = "../examples/load_edge_list.rs"]
mod load_edge_list;
#[allow(dead_code)]
#[path = "../examples/hop_estimation.rs"]
mod hop_estimation;
#[allow(dead_code)]
#[path = "../examples/select_seeds.rs"]
mod select_seeds;
#[allow(dead_code)]
#[path = "../examples/upper_bounds.rs"]
mod upper_bounds;
#[allow(dead_code)]
#[path = "../examples/monte_carlo.rs"]
mod monte_carlo;
#[allow(dead_code)]
#[path = "../examples/linear_threshold.rs"]
mod linear_threshold;
#[allow(dead_code)]
#[path = "../examples/baselines.rs"]
mod baselines;
#[allow(dead_code)]
#[path = "../examples/alpha_surface.rs"]
mod alpha_surface;

#[test]
fn load_edge_list_example() {
    let g = load_edge_list::run_example().unwrap();
    assert_eq!(g.node_count(), 4);
    let thirty = g.node_by_label(30).unwrap();
    assert!((g.in_weight(thirty) - 1.0).abs() < 1e-12);
}

#[test]
fn hop_estimation_example() {
    let (one, two) = hop_estimation::run_example().unwrap();
    assert!((one - 2.0).abs() < 1e-12);
    assert!((two - 2.125).abs() < 1e-12);
}

#[test]
fn select_seeds_example() {
    let r = select_seeds::run_example().unwrap();
    assert_eq!(r.seeds.len(), 10);
}

#[test]
fn upper_bounds_example() {
    let (plain, bounded) = upper_bounds::run_example().unwrap();
    assert!(bounded <= plain);
}

#[test]
fn monte_carlo_example() {
    let exact = monte_carlo::run_example().unwrap();
    assert!((exact[0] - 1.0).abs() < 1e-12);
    assert!(exact.windows(2).all(|w| w[0] <= w[1] + 1e-12));
}

#[test]
fn linear_threshold_example() {
    let (estimate, simulated) = linear_threshold::run_example().unwrap();
    assert!(estimate <= simulated * 1.05 + 1.0);
}

#[test]
fn baselines_example() {
    let scores = baselines::run_example().unwrap();
    assert_eq!(scores.len(), 4);
}

#[test]
fn alpha_surface_example() {
    let alpha = alpha_surface::run_example().unwrap();
    assert!(alpha > 0.0 && alpha <= 1.0);
}
