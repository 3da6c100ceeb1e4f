// Random instances and from-scratch reference computations shared by the
// integration suites. Nothing here calls the incremental estimator.
#![allow(dead_code)]

use hopim::{Diffusion, Graph, NodeId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edge probability mix: mostly uniform, with certain and tiny edges thrown
/// in so saturated survival factors show up.
fn draw_p<R: Rng>(rng: &mut R) -> f64 {
    match rng.random_range(0..10) {
        0 => 1.0,
        1 => 0.5,
        2 => rng.random_range(0.0..0.01),
        _ => rng.random_range(0.0..1.0),
    }
}

/// Random simple digraph on `n` nodes with `m` distinct edges (capped at
/// `n(n-1)`), probabilities from [`draw_p`]. With `two_cycles`, roughly a
/// third of the edges get their reverse as well (when room remains).
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, m: usize, two_cycles: bool) -> Graph {
    let mut pairs: Vec<(u32, u32)> =
        (0..n as u32).flat_map(|u| (0..n as u32).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut chosen: Vec<(u32, u32)> = Vec::new();
    for &(u, v) in &pairs {
        if chosen.len() >= m {
            break;
        }
        if chosen.contains(&(u, v)) {
            continue;
        }
        chosen.push((u, v));
        if two_cycles && chosen.len() < m && rng.random_bool(0.3) && !chosen.contains(&(v, u)) {
            chosen.push((v, u));
        }
    }
    let edges: Vec<(u32, u32, f64)> = chosen.into_iter().map(|(u, v)| (u, v, draw_p(rng))).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Small instance: `2..=max_n` nodes, `0..=max_m` edges.
pub fn small_digraph<R: Rng>(rng: &mut R, max_n: usize, max_m: usize) -> Graph {
    let n = rng.random_range(2..=max_n);
    let m = rng.random_range(0..=max_m.min(n * (n - 1)));
    let two_cycles = rng.random_bool(0.5);
    random_digraph(rng, n, m, two_cycles)
}

/// Rescales incoming weights so every node's in-weight is at most one.
pub fn lt_weights<R: Rng>(rng: &mut R, g: &Graph) -> Graph {
    let mut edges = Vec::with_capacity(g.edge_count());
    for v in g.nodes() {
        let raw: Vec<(NodeId, f64)> = g.in_edges(v).map(|(u, _)| (u, rng.random_range(0.05..1.0))).collect();
        let total: f64 = raw.iter().map(|x| x.1).sum();
        // sometimes exactly one, sometimes slack
        let budget = if rng.random_bool(0.3) { 1.0 } else { rng.random_range(0.1..1.0) };
        for (u, w) in raw {
            edges.push((u.0, v.0, w / total * budget));
        }
    }
    Graph::from_edges(g.node_count(), &edges).unwrap()
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize, size: usize) -> Vec<NodeId> {
    let mut all: Vec<NodeId> = (0..n as u32).map(NodeId).collect();
    all.shuffle(rng);
    all.truncate(size);
    all
}

/// Activation probabilities within one and two hops, straight from the
/// definitions: IC treats in-neighbors as independent, LT sums weights.
pub fn closed_form(g: &Graph, model: Diffusion, seeds: &[NodeId]) -> (Vec<f64>, Vec<f64>) {
    let n = g.node_count();
    let mut seed = vec![false; n];
    for s in seeds {
        seed[s.index()] = true;
    }
    let mut pi1 = vec![0.0; n];
    for v in g.nodes() {
        pi1[v.index()] = if seed[v.index()] {
            1.0
        } else {
            match model {
                Diffusion::Ic => {
                    1.0 - g.in_edges(v).filter(|(u, _)| seed[u.index()]).map(|(_, p)| 1.0 - p).product::<f64>()
                }
                Diffusion::Lt => g.in_edges(v).filter(|(u, _)| seed[u.index()]).map(|(_, p)| p).sum(),
            }
        };
    }
    let mut pi2 = vec![0.0; n];
    for v in g.nodes() {
        pi2[v.index()] = if seed[v.index()] {
            1.0
        } else {
            match model {
                Diffusion::Ic => {
                    1.0 - g.in_edges(v).map(|(w, p)| 1.0 - p * pi1[w.index()]).product::<f64>()
                }
                Diffusion::Lt => g.in_edges(v).map(|(w, p)| p * pi1[w.index()]).sum(),
            }
        };
    }
    (pi1, pi2)
}

pub fn closed_form_spread(g: &Graph, model: Diffusion, seeds: &[NodeId], hops: u32) -> f64 {
    let (pi1, pi2) = closed_form(g, model, seeds);
    if hops == 1 { pi1.iter().sum() } else { pi2.iter().sum() }
}

/// Greedy over the closed-form spread with full re-evaluation and
/// smallest-id tie-breaking at 1e-12.
pub fn reference_greedy(g: &Graph, model: Diffusion, hops: u32, k: usize) -> Vec<NodeId> {
    let mut seeds: Vec<NodeId> = Vec::new();
    for _ in 0..k {
        let base = closed_form_spread(g, model, &seeds, hops);
        let mut best: Option<(NodeId, f64)> = None;
        for u in g.nodes() {
            if seeds.contains(&u) {
                continue;
            }
            let mut with = seeds.clone();
            with.push(u);
            let gain = closed_form_spread(g, model, &with, hops) - base;
            if best.is_none_or(|(_, b)| gain > b + 1e-12) {
                best = Some((u, gain));
            }
        }
        seeds.push(best.unwrap().0);
    }
    seeds
}
