//! Seed selection: lazy greedy over the hop estimators, plus the
//! HighDegree and DegreeDiscount heuristics.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::upper_bounds;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::hop::{Diffusion, GainReport, HopState, Hops, Scratch, DEFAULT_REFRESH_INTERVAL};

/// Gains closer than this are ties, resolved by the smaller node id.
pub const TIE_EPSILON: f64 = 1e-12;

/// Added to bootstrap bounds so rounding in the bound never hides a node.
const BOUND_SLACK: f64 = 1e-9;

/// How the lazy-greedy queue is filled before the first pick.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bootstrap {
    /// Evaluate every node's exact single-seed gain ("TwoHop-O").
    None,
    /// Start from the single-seed upper bounds ("TwoHop"). IC only; under LT
    /// the queue is filled as for `None`.
    UpperBounds,
}

/// Parameters for building the per-run [`HopState`].
#[derive(Clone, Copy, Debug)]
pub struct HopConfig {
    pub diffusion: Diffusion,
    pub hops: Hops,
    pub refresh_interval: usize,
}

impl HopConfig {
    pub fn new(diffusion: Diffusion, hops: Hops) -> Self {
        HopConfig { diffusion, hops, refresh_interval: DEFAULT_REFRESH_INTERVAL }
    }

    pub fn state(&self, g: &Graph) -> Result<HopState> {
        Ok(HopState::new(g, self.diffusion, self.hops)?.with_refresh_interval(self.refresh_interval))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedResult {
    pub seeds: Vec<NodeId>,
    /// Empty for the degree heuristics.
    pub marginal_gains: Vec<f64>,
    pub algorithm: String,
    pub elapsed: f64,
    /// Number of marginal-gain evaluations performed.
    pub evaluations: u64,
}

impl SeedResult {
    pub fn total_gain(&self) -> f64 {
        self.marginal_gains.iter().sum()
    }
}

#[derive(Debug)]
struct CelfEntry {
    node: NodeId,
    cached_gain: f64,
    evaluated_at: Option<usize>,
}

impl PartialEq for CelfEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CelfEntry {}

impl PartialOrd for CelfEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CelfEntry {
    // Max-heap order: larger gain first, then smaller id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.cached_gain.total_cmp(&other.cached_gain).then_with(|| other.node.cmp(&self.node))
    }
}

fn check_k(g: &Graph, k: usize, min: usize) -> Result<()> {
    if k < min || k > g.node_count() {
        return Err(Error::KOutOfRange { k, nodes: g.node_count() });
    }
    Ok(())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))
}

/// Gains of every non-seed node against `state`, in node order.
fn evaluate_all(g: &Graph, state: &HopState, workers: usize) -> Result<Vec<(NodeId, f64)>> {
    let n = g.node_count();
    pool(workers)?.install(|| {
        (0..n as u32)
            .into_par_iter()
            .map(NodeId)
            .filter(|&v| !state.is_seed(v))
            .map_init(
                || Scratch::new(n),
                |scratch, v| state.eval_gain_with(g, v, scratch).map(|r| (v, r.gain)),
            )
            .collect()
    })
}

fn algorithm_name(cfg: &HopConfig, bootstrap: Bootstrap) -> String {
    let base = match cfg.hops {
        Hops::One => "onehop",
        Hops::Two => "twohop",
    };
    let suffix = match (cfg.hops, bootstrap) {
        (Hops::Two, Bootstrap::None) => "-o",
        _ => "",
    };
    let model = match cfg.diffusion {
        Diffusion::Ic => "",
        Diffusion::Lt => "-lt",
    };
    format!("{base}{suffix}{model}")
}

/// Lazy greedy (CELF) selection of `k` seeds maximizing the hop-limited
/// spread described by `cfg`.
///
/// Stale cached gains stay valid upper bounds because the hop-limited spread
/// is submodular, so an entry is committed as soon as it tops the queue
/// with a gain computed against the current seed set. Among candidates whose
/// gains lie within [`TIE_EPSILON`] of the best, the smallest id wins; the
/// result equals [`greedy_naive`] for either bootstrap.
pub fn greedy_celf(
    g: &Graph,
    cfg: HopConfig,
    k: usize,
    bootstrap: Bootstrap,
    workers: usize,
) -> Result<SeedResult> {
    check_k(g, k, 1)?;
    let start = Instant::now();
    let mut state = cfg.state(g)?;
    let mut scratch = Scratch::new(g.node_count());
    let mut evaluations = 0u64;

    let mut heap: BinaryHeap<CelfEntry> = if bootstrap == Bootstrap::UpperBounds && cfg.diffusion == Diffusion::Ic
    {
        let bounds = upper_bounds(g, cfg.hops.get());
        g.nodes()
            .map(|v| CelfEntry { node: v, cached_gain: bounds.get(v) + BOUND_SLACK, evaluated_at: None })
            .collect()
    } else {
        let gains = evaluate_all(g, &state, workers)?;
        evaluations += gains.len() as u64;
        gains
            .into_iter()
            .map(|(v, gain)| CelfEntry { node: v, cached_gain: gain, evaluated_at: Some(0) })
            .collect()
    };

    let mut seeds = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    let mut reports: HashMap<NodeId, GainReport> = HashMap::new();

    for round in 0..k {
        reports.clear();
        let mut refresh = |e: &mut CelfEntry, evaluations: &mut u64| -> Result<()> {
            let r = state.eval_gain_with(g, e.node, &mut scratch)?;
            *evaluations += 1;
            e.cached_gain = r.gain;
            e.evaluated_at = Some(round);
            reports.insert(e.node, r);
            Ok(())
        };

        // Bring a current evaluation to the top.
        loop {
            let top = heap.peek().expect("k <= |V| keeps the queue non-empty");
            if top.evaluated_at == Some(round) {
                break;
            }
            let mut e = heap.pop().unwrap();
            refresh(&mut e, &mut evaluations)?;
            heap.push(e);
        }

        // Everything that could tie with the leader must be current too.
        let lead = heap.peek().unwrap().cached_gain;
        let mut near = Vec::new();
        while heap.peek().is_some_and(|e| e.cached_gain >= lead - TIE_EPSILON) {
            let mut e = heap.pop().unwrap();
            if e.evaluated_at != Some(round) {
                refresh(&mut e, &mut evaluations)?;
            }
            near.push(e);
        }
        let best = near.iter().map(|e| e.cached_gain).fold(f64::NEG_INFINITY, f64::max);
        let pick = near
            .iter()
            .enumerate()
            .filter(|(_, e)| e.cached_gain >= best - TIE_EPSILON)
            .min_by_key(|(_, e)| e.node)
            .map(|(i, _)| i)
            .unwrap();
        let chosen = near.swap_remove(pick);
        heap.extend(near);

        let report = match reports.remove(&chosen.node) {
            Some(r) => r,
            None => {
                evaluations += 1;
                state.eval_gain_with(g, chosen.node, &mut scratch)?
            }
        };
        gains.push(report.gain);
        seeds.push(chosen.node);
        state.commit(g, report)?;
    }

    Ok(SeedResult {
        seeds,
        marginal_gains: gains,
        algorithm: algorithm_name(&cfg, bootstrap),
        elapsed: start.elapsed().as_secs_f64(),
        evaluations,
    })
}

/// Plain greedy: every round evaluates every non-seed node.
pub fn greedy_naive(g: &Graph, cfg: HopConfig, k: usize, workers: usize) -> Result<SeedResult> {
    check_k(g, k, 1)?;
    let start = Instant::now();
    let mut state = cfg.state(g)?;
    let mut seeds = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    let mut evaluations = 0u64;
    for _ in 0..k {
        let all = evaluate_all(g, &state, workers)?;
        evaluations += all.len() as u64;
        let best = all.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
        let u = all.iter().find(|e| e.1 >= best - TIE_EPSILON).unwrap().0;
        let report = state.eval_gain(g, u)?;
        gains.push(report.gain);
        seeds.push(u);
        state.commit(g, report)?;
    }
    Ok(SeedResult {
        seeds,
        marginal_gains: gains,
        algorithm: format!("{}-naive", algorithm_name(&cfg, Bootstrap::None)),
        elapsed: start.elapsed().as_secs_f64(),
        evaluations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DegreeKind {
    #[default]
    Out,
    In,
    Total,
}

impl DegreeKind {
    fn of(self, g: &Graph, v: NodeId) -> usize {
        match self {
            DegreeKind::Out => g.out_degree(v),
            DegreeKind::In => g.in_degree(v),
            DegreeKind::Total => g.out_degree(v) + g.in_degree(v),
        }
    }
}

/// The `k` nodes of largest degree, ties by smaller id.
pub fn high_degree(g: &Graph, k: usize, kind: DegreeKind) -> Result<SeedResult> {
    check_k(g, k, 0)?;
    let start = Instant::now();
    let mut nodes: Vec<NodeId> = g.nodes().collect();
    nodes.sort_by(|&a, &b| kind.of(g, b).cmp(&kind.of(g, a)).then(a.cmp(&b)));
    nodes.truncate(k);
    Ok(SeedResult {
        seeds: nodes,
        marginal_gains: Vec::new(),
        algorithm: "highdegree".into(),
        elapsed: start.elapsed().as_secs_f64(),
        evaluations: 0,
    })
}

/// Discounted degree of a node with out-degree `d` and `t` selected
/// in-neighbors.
pub fn discounted_degree(d: usize, t: usize, p: f64) -> f64 {
    let (d, t) = (d as f64, t as f64);
    d - 2.0 * t - (d - t) * t * p + 0.0
}

#[derive(PartialEq)]
struct Discounted(f64, NodeId);

impl Eq for Discounted {}

impl PartialOrd for Discounted {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Discounted {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// DegreeDiscount on out-degrees: repeatedly take the node with the largest
/// discounted degree, then discount its non-seed out-neighbors.
pub fn degree_discount(g: &Graph, k: usize, p: f64) -> Result<SeedResult> {
    check_k(g, k, 0)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("degree discount p = {p} outside [0, 1]")));
    }
    let start = Instant::now();
    let n = g.node_count();
    let mut t = vec![0usize; n];
    let mut dd: Vec<f64> = g.nodes().map(|v| discounted_degree(g.out_degree(v), 0, p)).collect();
    let mut selected = vec![false; n];
    let mut heap: BinaryHeap<Discounted> = g.nodes().map(|v| Discounted(dd[v.index()], v)).collect();
    let mut seeds = Vec::with_capacity(k);

    while seeds.len() < k {
        let Discounted(score, u) = heap.pop().expect("k <= |V|");
        if selected[u.index()] || score.to_bits() != dd[u.index()].to_bits() {
            continue;
        }
        selected[u.index()] = true;
        seeds.push(u);
        for &v in g.out_neighbors(u) {
            if selected[v.index()] {
                continue;
            }
            t[v.index()] += 1;
            dd[v.index()] = discounted_degree(g.out_degree(v), t[v.index()], p);
            heap.push(Discounted(dd[v.index()], v));
        }
    }
    Ok(SeedResult {
        seeds,
        marginal_gains: Vec::new(),
        algorithm: "degreediscount".into(),
        elapsed: start.elapsed().as_secs_f64(),
        evaluations: 0,
    })
}
