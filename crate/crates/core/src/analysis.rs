//! Closed-form guarantees for hop-limited greedy selection on scale-free
//! random graphs with a uniform propagation probability.
//!
//! Degree laws: `P0(d) ∝ d^-gamma` (node degree) and `P1(d) ∝ d^(1-gamma)`
//! (degree of the node at the end of a random edge), both over `d >= 1` with
//! the normalizing series truncated at a configurable maximum degree.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 1_000_000;
pub const MIN_TRUNCATION: usize = 1_000;
pub const FIXED_POINT_TOLERANCE: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITERATIONS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaleFreeParams {
    pub gamma: f64,
    pub p: f64,
    /// `k / |V|`.
    pub seed_ratio: f64,
    /// Largest degree kept in the infinite sums.
    pub truncation: usize,
}

impl ScaleFreeParams {
    pub fn new(gamma: f64, p: f64, seed_ratio: f64) -> Self {
        ScaleFreeParams { gamma, p, seed_ratio, truncation: DEFAULT_TRUNCATION }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("p = {} outside [0, 1]", self.p)));
        }
        if !(0.0..=1.0).contains(&self.seed_ratio) {
            return Err(Error::InvalidParameter(format!("seed ratio {} outside [0, 1]", self.seed_ratio)));
        }
        if self.truncation < MIN_TRUNCATION {
            return Err(Error::InvalidParameter(format!(
                "truncation {} below {MIN_TRUNCATION}",
                self.truncation
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegreeLaw {
    /// `d^-gamma`, needs `gamma > 1`.
    P0,
    /// `d^(1-gamma)`, needs `gamma > 2`.
    P1,
}

impl DegreeLaw {
    fn exponent(self, gamma: f64) -> f64 {
        match self {
            DegreeLaw::P0 => gamma,
            DegreeLaw::P1 => gamma - 1.0,
        }
    }
}

/// `sum_{d=1}^{max} d^-s`, added from the small end.
pub fn zeta_truncated(s: f64, max: usize) -> f64 {
    (1..=max).rev().map(|d| (d as f64).powf(-s)).sum()
}

/// Integral estimate of the series tail beyond `max`.
pub fn tail_bound(s: f64, max: usize) -> f64 {
    (max as f64).powf(1.0 - s) / (s - 1.0)
}

fn normalizer(s: f64, max: usize) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (s.to_bits(), max);
    if let Some(&z) = cache.lock().unwrap().get(&key) {
        return z;
    }
    // kept terms plus a midpoint estimate of the rest, so the law stays
    // normalized against the infinite series
    let z = zeta_truncated(s, max) + (max as f64 + 0.5).powf(1.0 - s) / (s - 1.0);
    cache.lock().unwrap().insert(key, z);
    z
}

/// A truncated power-law degree distribution.
#[derive(Clone, Copy, Debug)]
pub struct PowerLaw {
    exponent: f64,
    truncation: usize,
    norm: f64,
}

impl PowerLaw {
    pub fn new(law: DegreeLaw, gamma: f64, truncation: usize) -> Result<PowerLaw> {
        let exponent = law.exponent(gamma);
        if exponent.is_nan() || exponent <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "{law:?} does not converge for gamma = {gamma}"
            )));
        }
        Ok(PowerLaw { exponent, truncation, norm: normalizer(exponent, truncation) })
    }

    /// Probability of degree `d` (zero beyond the truncation; that mass is
    /// still counted in the normalizer).
    pub fn prob(&self, d: usize) -> f64 {
        if d == 0 || d > self.truncation {
            return 0.0;
        }
        (d as f64).powf(-self.exponent) / self.norm
    }

    /// Integral bound on the probability mass beyond the truncation.
    pub fn tail_bound(&self) -> f64 {
        tail_bound(self.exponent, self.truncation) / self.norm
    }

    /// `sum_{d >= 1} prob(d) * x^(d + shift)` for `x` in `[0, 1]`.
    fn series(&self, x: f64, shift: i32) -> f64 {
        if x >= 1.0 {
            return 1.0;
        }
        let mut sum = 0.0;
        let mut power = x.powi(1 + shift);
        for d in 1..=self.truncation {
            sum += self.prob(d) * power;
            power *= x;
            if power < 1e-18 {
                break;
            }
        }
        sum
    }
}

pub fn degree_dist(params: &ScaleFreeParams, law: DegreeLaw, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    Ok(PowerLaw::new(law, params.gamma, params.truncation)?.prob(d))
}

/// Lower bound on `E[sigma_h(S)] / E[sigma(S)]`:
///
/// `(1 - (1 - r)(1 - p r)) / (1 - (1 - r) P0(1) (1 - p A))` with
/// `A = 1 - (1 - r) P1(1)` and `r = k / |V|`, clamped to `[0, 1]`.
pub fn alpha_lower_bound(params: &ScaleFreeParams) -> Result<f64> {
    params.validate()?;
    let p0 = PowerLaw::new(DegreeLaw::P0, params.gamma, params.truncation)?.prob(1);
    let p1 = PowerLaw::new(DegreeLaw::P1, params.gamma, params.truncation)?.prob(1);
    let (r, p) = (params.seed_ratio, params.p);
    let a = 1.0 - (1.0 - r) * p1;
    let numerator = 1.0 - (1.0 - r) * (1.0 - p * r);
    let denominator = 1.0 - (1.0 - r) * p0 * (1.0 - p * a);
    if denominator.abs() < 1e-15 {
        return Err(Error::InvalidParameter(format!("degenerate denominator {denominator:e} for {params:?}")));
    }
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

/// Expected one-hop spread lower bound `(p + 1) k - p k^2 / n` for `k`
/// uniformly random seeds.
pub fn one_hop_expected_lb(p: f64, n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    (p + 1.0) * k - p * k * k / n
}

/// `(1 - 1/e) * alpha`.
pub fn guarantee_factor(alpha: f64) -> f64 {
    (1.0 - (-1.0f64).exp()) * alpha
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectedFraction {
    /// Expected fraction of activated nodes.
    pub phi: f64,
    /// Instrumental variable of the fixed point.
    pub varphi: f64,
    pub iterations: usize,
    /// `|1 - varphi - (1 - r) sum P1(d+1)(1 - p varphi)^d|`.
    pub residual_varphi: f64,
    /// `|1 - phi - (1 - r) sum P0(d)(1 - p varphi)^d|`.
    pub residual_phi: f64,
}

/// Solves the expected-fraction system of an infinite random power-law graph
/// by fixed-point iteration on `varphi`, starting at the seed ratio.
///
/// The map is a contraction for `p < 1`; if successive steps alternate sign
/// without shrinking, steps are halved from then on.
pub fn solve_expected_fraction(params: &ScaleFreeParams) -> Result<ExpectedFraction> {
    params.validate()?;
    let p0 = PowerLaw::new(DegreeLaw::P0, params.gamma, params.truncation)?;
    let p1 = PowerLaw::new(DegreeLaw::P1, params.gamma, params.truncation)?;
    let (r, p) = (params.seed_ratio, params.p);
    let map = |varphi: f64| 1.0 - (1.0 - r) * p1.series(1.0 - p * varphi, -1);

    let mut varphi = r;
    let mut damping = 1.0;
    let mut last_step = 0.0f64;
    let mut iterations = 0;
    loop {
        if iterations == FIXED_POINT_MAX_ITERATIONS {
            return Err(Error::NoConvergence { iterations });
        }
        iterations += 1;
        let step = map(varphi) - varphi;
        if step.abs() < FIXED_POINT_TOLERANCE {
            break;
        }
        if damping == 1.0 && step * last_step < 0.0 && step.abs() >= last_step.abs() {
            damping = 0.5;
        }
        varphi = (varphi + damping * step).clamp(0.0, 1.0);
        last_step = step;
    }

    let x = 1.0 - p * varphi;
    let phi = (1.0 - (1.0 - r) * p0.series(x, 0)).clamp(0.0, 1.0);
    Ok(ExpectedFraction {
        phi,
        varphi,
        iterations,
        residual_varphi: (1.0 - varphi - (1.0 - r) * p1.series(x, -1)).abs(),
        residual_phi: (1.0 - phi - (1.0 - r) * p0.series(x, 0)).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub p: f64,
    pub seed_ratio: f64,
    pub alpha: f64,
}

/// `alpha_lower_bound` over the grid `p_values x ratio_values`, p-major.
pub fn alpha_surface(
    gamma: f64,
    p_values: &[f64],
    ratio_values: &[f64],
    truncation: usize,
) -> Result<Vec<SurfacePoint>> {
    let mut out = Vec::with_capacity(p_values.len() * ratio_values.len());
    for &p in p_values {
        for &seed_ratio in ratio_values {
            let params = ScaleFreeParams { gamma, p, seed_ratio, truncation };
            out.push(SurfacePoint { p, seed_ratio, alpha: alpha_lower_bound(&params)? });
        }
    }
    Ok(out)
}

/// `steps + 1` evenly spaced values from `lo` to `hi`.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![lo];
    }
    (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect()
}

/// Formats `x` with ten significant digits in positional notation.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Writes `p,seed_ratio,alpha` rows.
pub fn write_surface_csv<W: Write>(points: &[SurfacePoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "p,seed_ratio,alpha")?;
    for pt in points {
        writeln!(out, "{},{},{}", sig10(pt.p), sig10(pt.seed_ratio), sig10(pt.alpha))?;
    }
    Ok(())
}
