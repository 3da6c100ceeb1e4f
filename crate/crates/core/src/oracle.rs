//! Ground-truth spread: Monte-Carlo cascades and exhaustive live-edge
//! enumeration.
//!
//! Under IC every edge is independently live with its probability. Under LT
//! every node keeps at most one incoming edge, edge `(x, v)` with probability
//! `b(x, v)` and none with the remaining mass. In both cases the spread
//! within `h` hops is the expected number of nodes reachable from the seeds
//! along live paths of at most `h` edges.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::hop::Diffusion;

/// Largest number of independent random choices the enumerators accept
/// (2^22 outcomes).
pub const MAX_ENUMERATION_BITS: u32 = 22;

/// Largest number of candidate seed sets [`brute_force_optimal`] scores.
pub const MAX_SEED_SETS: u128 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpreadEstimate {
    pub mean: f64,
    pub simulations: usize,
    /// Zero for a single simulation.
    pub std_error: f64,
    /// `None` means propagation runs until it stops.
    pub hop_limit: Option<u32>,
}

/// Reusable buffers for repeated cascades on one graph.
struct Cascade {
    active: Vec<bool>,
    threshold: Vec<f64>,
    weight: Vec<f64>,
    touched: Vec<NodeId>,
    frontier: Vec<NodeId>,
    next: Vec<NodeId>,
}

impl Cascade {
    fn new(n: usize) -> Self {
        Cascade {
            active: vec![false; n],
            threshold: vec![f64::NAN; n],
            weight: vec![0.0; n],
            touched: Vec::new(),
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn run<R: Rng>(
        &mut self,
        g: &Graph,
        seeds: &[NodeId],
        model: Diffusion,
        hop_limit: Option<u32>,
        rng: &mut R,
    ) -> usize {
        self.frontier.clear();
        for &s in seeds {
            if !self.active[s.index()] {
                self.active[s.index()] = true;
                self.touched.push(s);
                self.frontier.push(s);
            }
        }
        let mut count = self.frontier.len();
        let mut level = 0u32;
        while !self.frontier.is_empty() && hop_limit.is_none_or(|h| level < h) {
            self.next.clear();
            for i in 0..self.frontier.len() {
                let u = self.frontier[i];
                for (v, p) in g.out_edges(u) {
                    if self.active[v.index()] {
                        continue;
                    }
                    let fires = match model {
                        Diffusion::Ic => rng.random::<f64>() < p,
                        Diffusion::Lt => {
                            let vi = v.index();
                            if self.threshold[vi].is_nan() {
                                // uniform on (0, 1]
                                self.threshold[vi] = 1.0 - rng.random::<f64>();
                                self.touched.push(v);
                            }
                            self.weight[vi] += p;
                            self.weight[vi] >= self.threshold[vi]
                        }
                    };
                    if fires {
                        self.active[v.index()] = true;
                        self.touched.push(v);
                        self.next.push(v);
                    }
                }
            }
            count += self.next.len();
            std::mem::swap(&mut self.frontier, &mut self.next);
            level += 1;
        }
        for &v in &self.touched {
            self.active[v.index()] = false;
            self.threshold[v.index()] = f64::NAN;
            self.weight[v.index()] = 0.0;
        }
        self.touched.clear();
        count
    }
}

fn check_seeds(g: &Graph, seeds: &[NodeId]) -> Result<()> {
    match seeds.iter().find(|s| !g.contains(**s)) {
        Some(s) => Err(Error::UnknownNode(s.0 as u64)),
        None => Ok(()),
    }
}

/// One random cascade from `seeds`; returns the number of active nodes.
///
/// IC samples each edge out of a newly active node once. LT draws each
/// node's threshold when it is first reached and activates it as soon as the
/// weight from active in-neighbors reaches the threshold. Propagation stops
/// after `hop_limit` levels.
pub fn simulate_once<R: Rng>(
    g: &Graph,
    seeds: &[NodeId],
    model: Diffusion,
    hop_limit: Option<u32>,
    rng: &mut R,
) -> Result<usize> {
    check_seeds(g, seeds)?;
    Ok(Cascade::new(g.node_count()).run(g, seeds, model, hop_limit, rng))
}

/// Random stream for simulation `index` under the run seed `rng_seed`.
pub fn simulation_rng(rng_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(index);
    rng
}

/// Mean and standard error of `n_sims` cascades.
///
/// Simulation `i` draws from its own ChaCha8 stream, and results are summed
/// in simulation order, so the estimate depends only on `rng_seed`, never on
/// `workers`.
pub fn estimate_spread(
    g: &Graph,
    seeds: &[NodeId],
    model: Diffusion,
    hop_limit: Option<u32>,
    n_sims: usize,
    rng_seed: u64,
    workers: usize,
) -> Result<SpreadEstimate> {
    if n_sims == 0 {
        return Err(Error::InvalidParameter("at least one simulation is required".into()));
    }
    check_seeds(g, seeds)?;
    let n = g.node_count();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let counts: Vec<usize> = pool.install(|| {
        (0..n_sims as u64)
            .into_par_iter()
            .map_init(
                || Cascade::new(n),
                |c, i| c.run(g, seeds, model, hop_limit, &mut simulation_rng(rng_seed, i)),
            )
            .collect()
    });
    let total: f64 = counts.iter().map(|&c| c as f64).sum();
    let mean = total / n_sims as f64;
    let std_error = if n_sims > 1 {
        let ss: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
        (ss / (n_sims - 1) as f64 / n_sims as f64).sqrt()
    } else {
        0.0
    };
    Ok(SpreadEstimate { mean, simulations: n_sims, std_error, hop_limit })
}

/// Calls `visit(probability, live)` for every live-edge outcome, where
/// `live[v]` lists the live out-neighbors of `v`.
fn for_each_outcome<F: FnMut(f64, &[Vec<NodeId>])>(g: &Graph, model: Diffusion, mut visit: F) -> Result<()> {
    let n = g.node_count();
    let mut live: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    match model {
        Diffusion::Ic => {
            let mut certain = Vec::new();
            let mut random = Vec::new();
            for (u, v, p) in g.edges() {
                if p >= 1.0 {
                    certain.push((u, v));
                } else if p > 0.0 {
                    random.push((u, v, p));
                }
            }
            if random.len() as u32 > MAX_ENUMERATION_BITS {
                return Err(Error::TooLarge(format!(
                    "{} uncertain edges (limit {MAX_ENUMERATION_BITS})",
                    random.len()
                )));
            }
            for mask in 0u64..(1u64 << random.len()) {
                live.iter_mut().for_each(Vec::clear);
                for &(u, v) in &certain {
                    live[u.index()].push(v);
                }
                let mut prob = 1.0;
                for (bit, &(u, v, p)) in random.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        prob *= p;
                        live[u.index()].push(v);
                    } else {
                        prob *= 1.0 - p;
                    }
                }
                visit(prob, &live);
            }
        }
        Diffusion::Lt => {
            // choices[v]: (chosen in-neighbor or None, probability)
            let mut choices: Vec<Vec<(Option<NodeId>, f64)>> = Vec::with_capacity(n);
            let mut outcomes: f64 = 1.0;
            for v in g.nodes() {
                let mut c: Vec<(Option<NodeId>, f64)> =
                    g.in_edges(v).filter(|e| e.1 > 0.0).map(|(x, b)| (Some(x), b)).collect();
                let rest = 1.0 - g.in_weight(v);
                if rest > 0.0 {
                    c.push((None, rest));
                }
                if c.is_empty() {
                    c.push((None, 1.0));
                }
                outcomes *= c.len() as f64;
                choices.push(c);
            }
            if outcomes > (1u64 << MAX_ENUMERATION_BITS) as f64 {
                return Err(Error::TooLarge(format!(
                    "{outcomes} LT outcomes (limit 2^{MAX_ENUMERATION_BITS})"
                )));
            }
            let mut digit = vec![0usize; n];
            loop {
                live.iter_mut().for_each(Vec::clear);
                let mut prob = 1.0;
                for v in 0..n {
                    let (parent, b) = choices[v][digit[v]];
                    prob *= b;
                    if let Some(x) = parent {
                        live[x.index()].push(NodeId(v as u32));
                    }
                }
                visit(prob, &live);
                // mixed-radix increment
                let mut i = 0;
                while i < n {
                    digit[i] += 1;
                    if digit[i] < choices[i].len() {
                        break;
                    }
                    digit[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }
    Ok(())
}

fn reach_count(
    live: &[Vec<NodeId>],
    seeds: &[NodeId],
    hop_limit: Option<u32>,
    seen: &mut [bool],
    queue: &mut VecDeque<(NodeId, u32)>,
) -> usize {
    seen.iter_mut().for_each(|s| *s = false);
    queue.clear();
    let mut count = 0;
    for &s in seeds {
        if !seen[s.index()] {
            seen[s.index()] = true;
            count += 1;
            queue.push_back((s, 0));
        }
    }
    while let Some((u, d)) = queue.pop_front() {
        if hop_limit.is_some_and(|h| d >= h) {
            continue;
        }
        for &v in &live[u.index()] {
            if !seen[v.index()] {
                seen[v.index()] = true;
                count += 1;
                queue.push_back((v, d + 1));
            }
        }
    }
    count
}

/// Exact expected spread of each seed set in `sets`, sharing one pass over
/// the outcome space.
pub fn exact_spread_many(
    g: &Graph,
    sets: &[Vec<NodeId>],
    model: Diffusion,
    hop_limit: Option<u32>,
) -> Result<Vec<f64>> {
    for s in sets {
        check_seeds(g, s)?;
    }
    let mut totals = vec![0.0; sets.len()];
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    for_each_outcome(g, model, |prob, live| {
        if prob == 0.0 {
            return;
        }
        for (total, s) in totals.iter_mut().zip(sets) {
            *total += prob * reach_count(live, s, hop_limit, &mut seen, &mut queue) as f64;
        }
    })?;
    Ok(totals)
}

/// Exact expected number of nodes reached from `seeds` within `hop_limit`
/// hops, by enumerating every live-edge outcome.
pub fn exact_spread(g: &Graph, seeds: &[NodeId], model: Diffusion, hop_limit: Option<u32>) -> Result<f64> {
    Ok(exact_spread_many(g, &[seeds.to_vec()], model, hop_limit)?[0])
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| NodeId(i as u32)).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Best `k`-seed set by exhaustive search; ties go to the lexicographically
/// smallest set.
pub fn brute_force_optimal(
    g: &Graph,
    k: usize,
    model: Diffusion,
    hop_limit: Option<u32>,
) -> Result<(Vec<NodeId>, f64)> {
    if k > g.node_count() {
        return Err(Error::KOutOfRange { k, nodes: g.node_count() });
    }
    let count = binomial(g.node_count(), k);
    if count > MAX_SEED_SETS {
        return Err(Error::TooLarge(format!("{count} candidate seed sets (limit {MAX_SEED_SETS})")));
    }
    let sets = k_subsets(g.node_count(), k);
    let values = exact_spread_many(g, &sets, model, hop_limit)?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] + 1e-12 {
            best = i;
        }
    }
    Ok((sets[best].clone(), values[best]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> Graph {
        Graph::from_edges(3, &[(0, 1, 0.5), (1, 2, 0.5)]).unwrap()
    }

    fn chain(p: f64) -> Graph {
        Graph::from_edges(3, &[(0, 1, p), (1, 2, p)]).unwrap()
    }

    #[test]
    fn certain_chain() {
        let g = chain(1.0);
        let mut rng = simulation_rng(1, 0);
        for _ in 0..20 {
            assert_eq!(simulate_once(&g, &[NodeId(0)], Diffusion::Ic, None, &mut rng).unwrap(), 3);
            assert_eq!(simulate_once(&g, &[NodeId(0)], Diffusion::Ic, Some(1), &mut rng).unwrap(), 2);
            assert_eq!(simulate_once(&g, &[NodeId(0)], Diffusion::Lt, None, &mut rng).unwrap(), 3);
        }
    }

    #[test]
    fn zero_probability_keeps_seeds_only() {
        let g = chain(0.0);
        let mut rng = simulation_rng(2, 0);
        let seeds = [NodeId(0), NodeId(2)];
        assert_eq!(simulate_once(&g, &seeds, Diffusion::Ic, None, &mut rng).unwrap(), 2);
        assert_eq!(simulate_once(&g, &seeds, Diffusion::Lt, None, &mut rng).unwrap(), 2);
    }

    #[test]
    fn invalid_seed_rejected() {
        let g = g1();
        let mut rng = simulation_rng(0, 0);
        assert!(simulate_once(&g, &[NodeId(9)], Diffusion::Ic, None, &mut rng).is_err());
        assert!(exact_spread(&g, &[NodeId(9)], Diffusion::Ic, None).is_err());
    }

    #[test]
    fn g1_exact() {
        let g = g1();
        let s = [NodeId(0)];
        assert!((exact_spread(&g, &s, Diffusion::Ic, Some(2)).unwrap() - 1.75).abs() < 1e-12);
        assert!((exact_spread(&g, &s, Diffusion::Ic, Some(1)).unwrap() - 1.5).abs() < 1e-12);
        assert!((exact_spread(&g, &s, Diffusion::Ic, None).unwrap() - 1.75).abs() < 1e-12);
        assert_eq!(exact_spread(&g, &[], Diffusion::Ic, None).unwrap(), 0.0);
        assert!((exact_spread(&g, &s, Diffusion::Lt, Some(2)).unwrap() - 1.75).abs() < 1e-12);
    }

    #[test]
    fn estimate_all_seeds_is_exact() {
        let g = g1();
        let all: Vec<NodeId> = g.nodes().collect();
        let e = estimate_spread(&g, &all, Diffusion::Ic, None, 200, 3, 1).unwrap();
        assert_eq!(e.mean, 3.0);
        assert_eq!(e.std_error, 0.0);
        let one = estimate_spread(&g, &[NodeId(0)], Diffusion::Ic, None, 1, 3, 1).unwrap();
        assert_eq!(one.std_error, 0.0);
        assert!(estimate_spread(&g, &all, Diffusion::Ic, None, 0, 3, 1).is_err());
    }

    #[test]
    fn estimate_near_exact_and_reproducible() {
        let g = g1();
        let e = estimate_spread(&g, &[NodeId(0)], Diffusion::Ic, None, 10_000, 11, 1).unwrap();
        assert!((e.mean - 1.75).abs() <= 4.0 * e.std_error);
        let again = estimate_spread(&g, &[NodeId(0)], Diffusion::Ic, None, 10_000, 11, 3).unwrap();
        assert_eq!(e.mean.to_bits(), again.mean.to_bits());
    }

    #[test]
    fn brute_force_examples() {
        let pairs = Graph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let (s, v) = brute_force_optimal(&pairs, 2, Diffusion::Ic, None).unwrap();
        assert_eq!(s, vec![NodeId(0), NodeId(2)]);
        assert!((v - 4.0).abs() < 1e-12);

        let (s, v) = brute_force_optimal(&g1(), 1, Diffusion::Ic, None).unwrap();
        assert_eq!(s, vec![NodeId(0)]);
        assert!((v - 1.75).abs() < 1e-12);

        let (s, v) = brute_force_optimal(&g1(), 3, Diffusion::Ic, None).unwrap();
        assert_eq!(s.len(), 3);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn subsets_are_lexicographic() {
        let s = k_subsets(4, 2);
        assert_eq!(s.len(), 6);
        assert_eq!(s[0], vec![NodeId(0), NodeId(1)]);
        assert_eq!(s[5], vec![NodeId(2), NodeId(3)]);
        assert_eq!(k_subsets(3, 0), vec![Vec::<NodeId>::new()]);
        assert_eq!(binomial(10, 3), 120);
    }

    #[test]
    fn enumeration_limit() {
        let edges: Vec<(u32, u32, f64)> = (0..30).map(|i| (i, i + 1, 0.5)).collect();
        let g = Graph::from_edges(31, &edges).unwrap();
        assert!(matches!(exact_spread(&g, &[NodeId(0)], Diffusion::Ic, None), Err(Error::TooLarge(_))));
    }
}
