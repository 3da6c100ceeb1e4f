use hopim::analysis::*;

// Reference values of the Riemann zeta function.
const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
const ZETA3: f64 = 1.202_056_903_159_594_3;

fn params(p: f64, r: f64) -> ScaleFreeParams {
    ScaleFreeParams::new(3.0, p, r)
}

#[test]
fn degree_laws_at_gamma_three() {
    let q = params(0.0, 0.1);
    let p0 = degree_dist(&q, DegreeLaw::P0, 1).unwrap();
    let p1 = degree_dist(&q, DegreeLaw::P1, 1).unwrap();
    assert!((p0 - 1.0 / ZETA3).abs() < 1e-9, "{p0}");
    assert!((p1 - 1.0 / ZETA2).abs() < 1e-6, "{p1}");
    assert!((p0 - 0.83190).abs() < 1e-5);
    assert!((p1 - 0.60793).abs() < 1e-5);
    let p0_2 = degree_dist(&q, DegreeLaw::P0, 2).unwrap();
    assert!((p0_2 - p0 / 8.0).abs() < 1e-15);
    assert!(degree_dist(&q, DegreeLaw::P0, 0).is_err());
}

#[test]
fn zeta_truncation_and_tail() {
    let z = zeta_truncated(3.0, 1_000_000);
    assert!((z + tail_bound(3.0, 1_000_000) - ZETA3).abs() < 1e-12);
    assert!(tail_bound(3.0, 1_000_000) < 1e-9);
}

/// Alpha computed from reference zeta values instead of truncated sums.
fn alpha_reference(p: f64, r: f64) -> f64 {
    let (p0, p1) = (1.0 / ZETA3, 1.0 / ZETA2);
    let a = 1.0 - (1.0 - r) * p1;
    ((1.0 - (1.0 - r) * (1.0 - p * r)) / (1.0 - (1.0 - r) * p0 * (1.0 - p * a))).clamp(0.0, 1.0)
}

#[test]
fn alpha_matches_reference() {
    for p in linspace(0.0, 0.1, 10) {
        for r in linspace(0.0, 0.5, 10) {
            let got = alpha_lower_bound(&params(p, r)).unwrap();
            assert!((got - alpha_reference(p, r)).abs() < 1e-6, "p={p} r={r}");
            assert!((0.0..=1.0).contains(&got));
        }
    }
    let a = alpha_lower_bound(&params(0.0, 0.5)).unwrap();
    assert!((a - 0.856_096_5).abs() < 1e-6, "{a}");
    assert_eq!(alpha_lower_bound(&params(0.3, 1.0)).unwrap(), 1.0);
    assert!(alpha_lower_bound(&params(1.5, 0.1)).is_err());
}

#[test]
fn alpha_grows_with_seed_ratio() {
    for p in linspace(0.0, 0.1, 10) {
        let values: Vec<f64> =
            linspace(0.0, 0.5, 20).into_iter().map(|r| alpha_lower_bound(&params(p, r)).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0] - 1e-12), "p={p}: {values:?}");
    }
}

#[test]
fn guarantees() {
    assert!((guarantee_factor(1.0) - 0.632_120_558_828_557_7).abs() < 1e-15);
    assert_eq!(one_hop_expected_lb(0.0, 100, 10), 10.0);
    assert!((one_hop_expected_lb(0.1, 100, 10) - 10.9).abs() < 1e-12);
}

/// Root of `1 - x - (1 - r) sum_d P1(d) (1 - p x)^(d - 1)` by bisection.
fn varphi_by_bisection(p: f64, r: f64) -> f64 {
    let f = |x: f64| {
        let y = 1.0 - p * x;
        let mut s = 0.0;
        let mut pow = 1.0;
        for d in 1..=200_000u32 {
            s += pow / (d as f64 * d as f64) / ZETA2;
            pow *= y;
        }
        1.0 - x - (1.0 - r) * s
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 { lo = mid } else { hi = mid }
    }
    0.5 * (lo + hi)
}

#[test]
fn expected_fraction_fixed_point() {
    for (p, r) in [(0.05, 0.1), (0.1, 0.3), (0.5, 0.05), (0.9, 0.01)] {
        let sol = solve_expected_fraction(&params(p, r)).unwrap();
        assert!(sol.residual_varphi < 1e-10 && sol.residual_phi < 1e-10, "{sol:?}");
        assert!((sol.varphi - varphi_by_bisection(p, r)).abs() < 1e-6, "p={p} r={r}: {}", sol.varphi);
        assert!(sol.phi >= r - 1e-12 && sol.phi <= 1.0);
    }
    let none = solve_expected_fraction(&params(0.0, 0.2)).unwrap();
    assert!((none.phi - 0.2).abs() < 1e-9);
}

#[test]
fn surface_csv_layout() {
    let pts = alpha_surface(3.0, &[0.0, 0.1], &[0.1, 0.5], 10_000).unwrap();
    let mut buf = Vec::new();
    write_surface_csv(&pts, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,seed_ratio,alpha");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,0.1"));
    assert!(alpha_surface(3.0, &[0.0], &[0.1], 10).is_err());
}
