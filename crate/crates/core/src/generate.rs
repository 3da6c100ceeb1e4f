//! Synthetic power-law graphs for benchmarks and desk-scale experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Directed Chung–Lu graph with `m` distinct edges whose expected in- and
/// out-degrees follow a power law with exponent `gamma`.
///
/// Node `i` has weight `(i + 1)^(-1 / (gamma - 1))`; each edge picks its
/// source and target independently in proportion to the weights, and
/// self-loops and repeated pairs are redrawn. Probabilities are left at zero.
pub fn power_law_digraph(n: usize, m: usize, gamma: f64, seed: u64) -> Result<Graph> {
    if n < 2 || gamma.is_nan() || gamma <= 1.0 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and gamma > 1 (n = {n}, gamma = {gamma})")));
    }
    if m as u128 > (n as u128) * (n as u128 - 1) / 2 {
        return Err(Error::InvalidParameter(format!("{m} edges is too dense for {n} nodes")));
    }
    let exponent = -1.0 / (gamma - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(exponent)).collect();
    let sampler = WeightedAliasIndex::new(weights).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut keys: Vec<u64> = Vec::with_capacity(m + m / 8 + 16);
    let mut rounds = 0;
    while keys.len() < m {
        rounds += 1;
        if rounds > 64 {
            return Err(Error::InvalidParameter(format!(
                "could not draw {m} distinct edges over {n} nodes with gamma = {gamma}"
            )));
        }
        let want = (m - keys.len()) + (m - keys.len()) / 8 + 16;
        for _ in 0..want {
            let u = sampler.sample(&mut rng) as u64;
            let v = sampler.sample(&mut rng) as u64;
            if u != v {
                keys.push(u << 32 | v);
            }
        }
        keys.sort_unstable();
        keys.dedup();
    }
    if keys.len() > m {
        keys.shuffle(&mut rng);
        keys.truncate(m);
    }
    let edges: Vec<(u32, u32, f64)> = keys.iter().map(|&k| ((k >> 32) as u32, k as u32, 0.0)).collect();
    Graph::from_edges(n, &edges)
}

/// Undirected configuration-model graph with degrees drawn from
/// `P(d) ∝ d^-gamma` on `1..=max_degree`, stored with both edge directions.
/// Self-loops and repeated pairs produced by the stub matching are dropped.
pub fn configuration_model(n: usize, gamma: f64, max_degree: usize, seed: u64) -> Result<Graph> {
    if n < 2 || max_degree == 0 || gamma.is_nan() || gamma <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2, max_degree >= 1 and gamma > 1 (n = {n}, gamma = {gamma})"
        )));
    }
    let law: Vec<f64> = (1..=max_degree).map(|d| (d as f64).powf(-gamma)).collect();
    let sampler = WeightedAliasIndex::new(law).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut stubs: Vec<u32> = Vec::new();
    for v in 0..n as u32 {
        let d = sampler.sample(&mut rng) + 1;
        stubs.extend(std::iter::repeat_n(v, d));
    }
    if stubs.len() % 2 == 1 {
        stubs.push(rng.random_range(0..n as u32));
    }
    stubs.shuffle(&mut rng);

    let mut keys: Vec<u64> = Vec::with_capacity(stubs.len());
    for pair in stubs.chunks_exact(2) {
        let (a, b) = (pair[0] as u64, pair[1] as u64);
        if a != b {
            keys.push(a << 32 | b);
            keys.push(b << 32 | a);
        }
    }
    keys.sort_unstable();
    keys.dedup();
    let edges: Vec<(u32, u32, f64)> = keys.iter().map(|&k| ((k >> 32) as u32, k as u32, 0.0)).collect();
    Graph::from_edges(n, &edges)
}
