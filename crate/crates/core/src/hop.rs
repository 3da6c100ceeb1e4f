//! Exact one- and two-hop influence estimation with incremental updates.
//!
//! [`HopState`] keeps, for every node, the probability that it stays
//! inactive within one hop (`q1 = 1 - pi1`) and within two hops
//! (`q2 = 1 - pi2`) of the current seed set. Storing the survival complement
//! keeps the multiplicative IC updates well conditioned when `pi` is close
//! to one.
//!
//! Evaluation and commitment are split: [`HopState::eval_gain`] is read-only
//! and returns a [`GainReport`] holding the new values of every node the
//! candidate would touch, and [`HopState::commit`] applies such a report.
//! Each commit bumps a version stamp so reports computed against an older
//! state are rejected.
//!
//! IC, one hop: adding `u` multiplies `q1[v]` by `1 - p(u,v)` for every
//! non-seed out-neighbor `v`.
//!
//! IC, two hops: `q2[v] = prod over x in I_v of (1 - p(x,v) * pi1(x))`, so a
//! change of `pi1(w)` rescales `q2` of each out-neighbor of `w` by
//! `(1 - p(w,v) * pi1_new(w)) / (1 - p(w,v) * pi1_old(w))`. Adding `u` changes
//! `pi1` of `u` itself and of its non-seed out-neighbors, which bounds the
//! update to nodes within two hops of `u`. When a denominator vanishes the
//! affected node is recomputed from its inverse neighbors instead.
//!
//! LT: `pi1(v) = sum of b(x,v)` over seed in-neighbors and
//! `pi2(v) = sum over x in I_v of b(x,v) * pi1(x)`; both are maintained
//! additively.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Commits between full recomputations of the stored probabilities.
pub const DEFAULT_REFRESH_INTERVAL: usize = 1024;

/// Below this the two-hop update factor is treated as 0/0.
pub const DIVISION_GUARD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Diffusion {
    /// Independent cascade.
    Ic,
    /// Linear threshold.
    Lt,
}

impl std::str::FromStr for Diffusion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ic" => Ok(Diffusion::Ic),
            "lt" => Ok(Diffusion::Lt),
            _ => Err(Error::InvalidParameter(format!("unknown diffusion model `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hops {
    One,
    Two,
}

impl Hops {
    pub fn get(self) -> u32 {
        match self {
            Hops::One => 1,
            Hops::Two => 2,
        }
    }
}

impl TryFrom<u32> for Hops {
    type Error = Error;

    fn try_from(h: u32) -> Result<Self> {
        match h {
            1 => Ok(Hops::One),
            2 => Ok(Hops::Two),
            _ => Err(Error::InvalidParameter(format!(
                "exact hop estimation supports 1 or 2 hops, got {h}"
            ))),
        }
    }
}

/// New survival complements for one node affected by a candidate seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Touched {
    pub node: NodeId,
    pub q1: f64,
    /// Equal to `q1` when the state tracks one hop only.
    pub q2: f64,
}

/// Marginal gain of a candidate seed plus everything needed to commit it.
#[derive(Clone, Debug)]
pub struct GainReport {
    pub candidate: NodeId,
    pub gain: f64,
    pub touched: Vec<Touched>,
    version: u64,
}

impl GainReport {
    pub fn version(&self) -> u64 {
        self.version
    }
}

/// Reusable per-worker buffer for two-hop evaluations.
///
/// Maps a node to its position in the report being built; cleared after every
/// evaluation, so one instance can serve any number of calls on one graph.
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    slot: Vec<u32>,
    recompute: Vec<usize>,
}

impl Scratch {
    pub fn new(node_count: usize) -> Self {
        Scratch { slot: vec![0; node_count], recompute: Vec::new() }
    }

    fn prepare(&mut self, n: usize) {
        if self.slot.len() < n {
            self.slot.resize(n, 0);
        }
        self.recompute.clear();
    }
}

#[derive(Clone, Debug)]
pub struct HopState {
    diffusion: Diffusion,
    hops: Hops,
    seeds: Vec<NodeId>,
    is_seed: Vec<bool>,
    q1: Vec<f64>,
    // empty when hops == One
    q2: Vec<f64>,
    sigma: f64,
    version: u64,
    refresh_interval: usize,
    commits_since_refresh: usize,
}

impl HopState {
    /// Empty seed set: every node inactive, spread zero.
    pub fn new(g: &Graph, diffusion: Diffusion, hops: Hops) -> Result<HopState> {
        if diffusion == Diffusion::Lt {
            let bad = g.validate_lt();
            if !bad.is_empty() {
                return Err(Error::LtViolation(bad));
            }
        }
        let n = g.node_count();
        Ok(HopState {
            diffusion,
            hops,
            seeds: Vec::new(),
            is_seed: vec![false; n],
            q1: vec![1.0; n],
            q2: if hops == Hops::Two { vec![1.0; n] } else { Vec::new() },
            sigma: 0.0,
            version: 0,
            refresh_interval: DEFAULT_REFRESH_INTERVAL,
            commits_since_refresh: 0,
        })
    }

    /// Sets how many commits may pass between full recomputations;
    /// `0` disables periodic refresh.
    pub fn with_refresh_interval(mut self, commits: usize) -> Self {
        self.refresh_interval = commits;
        self
    }

    pub fn diffusion(&self) -> Diffusion {
        self.diffusion
    }

    pub fn hops(&self) -> Hops {
        self.hops
    }

    pub fn node_count(&self) -> usize {
        self.q1.len()
    }

    /// Seeds in commit order.
    pub fn seeds(&self) -> &[NodeId] {
        &self.seeds
    }

    pub fn is_seed(&self, u: NodeId) -> bool {
        self.is_seed[u.index()]
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    /// Hop-limited spread of the current seed set.
    pub fn spread(&self) -> f64 {
        self.sigma
    }

    pub fn pi1(&self, v: NodeId) -> f64 {
        1.0 - self.q1[v.index()]
    }

    /// Two-hop activation probability; panics on a one-hop state.
    pub fn pi2(&self, v: NodeId) -> f64 {
        assert_eq!(self.hops, Hops::Two, "two-hop probabilities are not tracked");
        1.0 - self.q2[v.index()]
    }

    /// Activation probability at the state's own hop limit.
    pub fn pi(&self, v: NodeId) -> f64 {
        1.0 - self.q_h()[v.index()]
    }

    fn q_h(&self) -> &[f64] {
        match self.hops {
            Hops::One => &self.q1,
            Hops::Two => &self.q2,
        }
    }

    pub fn eval_gain(&self, g: &Graph, u: NodeId) -> Result<GainReport> {
        self.eval_gain_with(g, u, &mut Scratch::default())
    }

    /// Exact marginal gain of adding `u`; leaves the state untouched.
    pub fn eval_gain_with(&self, g: &Graph, u: NodeId, scratch: &mut Scratch) -> Result<GainReport> {
        if !g.contains(u) || g.node_count() != self.node_count() {
            return Err(Error::UnknownNode(u.0 as u64));
        }
        if self.is_seed[u.index()] {
            return Err(Error::AlreadySeed(u));
        }
        let (gain, touched) = match (self.diffusion, self.hops) {
            (Diffusion::Ic, Hops::One) => self.ic_one_hop(g, u),
            (Diffusion::Ic, Hops::Two) => self.ic_two_hop(g, u, scratch),
            (Diffusion::Lt, Hops::One) => self.lt_one_hop(g, u),
            (Diffusion::Lt, Hops::Two) => self.lt_two_hop(g, u, scratch),
        };
        Ok(GainReport { candidate: u, gain: gain.max(0.0), touched, version: self.version })
    }

    fn ic_one_hop(&self, g: &Graph, u: NodeId) -> (f64, Vec<Touched>) {
        let mut gain = self.q1[u.index()];
        let mut touched = Vec::with_capacity(g.out_degree(u));
        for (v, p) in g.out_edges(u) {
            if self.is_seed[v.index()] {
                continue;
            }
            let old = self.q1[v.index()];
            let new = old * (1.0 - p);
            gain += old - new;
            touched.push(Touched { node: v, q1: new, q2: new });
        }
        (gain, touched)
    }

    fn lt_one_hop(&self, g: &Graph, u: NodeId) -> (f64, Vec<Touched>) {
        let mut gain = self.q1[u.index()];
        let mut touched = Vec::with_capacity(g.out_degree(u));
        for (v, b) in g.out_edges(u) {
            if self.is_seed[v.index()] {
                continue;
            }
            let old = self.q1[v.index()];
            let new = (old - b).max(0.0);
            gain += old - new;
            touched.push(Touched { node: v, q1: new, q2: new });
        }
        (gain, touched)
    }

    /// Returns the report position for `v`, creating an entry holding the
    /// current values on first sight.
    #[inline]
    fn entry(&self, v: NodeId, touched: &mut Vec<Touched>, scratch: &mut Scratch) -> usize {
        let s = &mut scratch.slot[v.index()];
        if *s == 0 {
            touched.push(Touched { node: v, q1: self.q1[v.index()], q2: self.q2[v.index()] });
            *s = touched.len() as u32;
        }
        *s as usize - 1
    }

    fn ic_two_hop(&self, g: &Graph, u: NodeId, scratch: &mut Scratch) -> (f64, Vec<Touched>) {
        scratch.prepare(g.node_count());
        let mut touched: Vec<Touched> = Vec::new();
        let pi1_u_old = 1.0 - self.q1[u.index()];

        for (w, p_uw) in g.out_edges(u) {
            if self.is_seed[w.index()] {
                continue;
            }
            let q1_old = self.q1[w.index()];
            let q1_new = q1_old * (1.0 - p_uw);
            let at = self.entry(w, &mut touched, scratch);
            touched[at].q1 = q1_new;

            // u itself now has pi1 = 1
            let den = 1.0 - p_uw * pi1_u_old;
            if den < DIVISION_GUARD {
                scratch.recompute.push(at);
            } else {
                touched[at].q2 *= (1.0 - p_uw) / den;
            }

            let (pi1_old, pi1_new) = (1.0 - q1_old, 1.0 - q1_new);
            if pi1_new == pi1_old {
                continue;
            }
            for (v, p_wv) in g.out_edges(w) {
                if v == u || self.is_seed[v.index()] {
                    continue;
                }
                let at = self.entry(v, &mut touched, scratch);
                let den = 1.0 - p_wv * pi1_old;
                if den < DIVISION_GUARD {
                    scratch.recompute.push(at);
                } else {
                    touched[at].q2 *= (1.0 - p_wv * pi1_new) / den;
                }
            }
        }

        for i in 0..scratch.recompute.len() {
            let at = scratch.recompute[i];
            let v = touched[at].node;
            let mut q = 1.0;
            for (x, p) in g.in_edges(v) {
                let pi1 = if x == u {
                    1.0
                } else {
                    match scratch.slot[x.index()] {
                        0 => 1.0 - self.q1[x.index()],
                        s => 1.0 - touched[s as usize - 1].q1,
                    }
                };
                q *= 1.0 - p * pi1;
            }
            touched[at].q2 = q;
        }

        let mut gain = self.q2[u.index()];
        for t in touched.iter_mut() {
            t.q2 = t.q2.clamp(0.0, 1.0);
            gain += self.q2[t.node.index()] - t.q2;
            scratch.slot[t.node.index()] = 0;
        }
        (gain, touched)
    }

    fn lt_two_hop(&self, g: &Graph, u: NodeId, scratch: &mut Scratch) -> (f64, Vec<Touched>) {
        scratch.prepare(g.node_count());
        let mut touched: Vec<Touched> = Vec::new();
        let d_pi1_u = self.q1[u.index()];

        for (w, b_uw) in g.out_edges(u) {
            if self.is_seed[w.index()] {
                continue;
            }
            let at = self.entry(w, &mut touched, scratch);
            touched[at].q1 = (self.q1[w.index()] - b_uw).max(0.0);
            touched[at].q2 -= b_uw * d_pi1_u;

            for (v, b_wv) in g.out_edges(w) {
                if v == u || self.is_seed[v.index()] {
                    continue;
                }
                let at = self.entry(v, &mut touched, scratch);
                touched[at].q2 -= b_wv * b_uw;
            }
        }

        let mut gain = self.q2[u.index()];
        for t in touched.iter_mut() {
            t.q2 = t.q2.clamp(0.0, 1.0);
            gain += self.q2[t.node.index()] - t.q2;
            scratch.slot[t.node.index()] = 0;
        }
        (gain, touched)
    }

    /// Adds the report's candidate to the seed set.
    pub fn commit(&mut self, g: &Graph, report: GainReport) -> Result<()> {
        if report.version != self.version {
            return Err(Error::StaleReport { report: report.version, state: self.version });
        }
        let u = report.candidate;
        if self.is_seed[u.index()] {
            return Err(Error::AlreadySeed(u));
        }
        self.is_seed[u.index()] = true;
        self.seeds.push(u);
        self.q1[u.index()] = 0.0;
        let two = self.hops == Hops::Two;
        if two {
            self.q2[u.index()] = 0.0;
        }
        for t in &report.touched {
            self.q1[t.node.index()] = t.q1;
            if two {
                self.q2[t.node.index()] = t.q2;
            }
        }
        self.sigma += report.gain;
        self.version += 1;
        self.commits_since_refresh += 1;
        if self.refresh_interval > 0 && self.commits_since_refresh >= self.refresh_interval {
            self.refresh(g);
        }
        Ok(())
    }

    /// Evaluates and commits `u` in one step, returning its marginal gain.
    pub fn add_seed(&mut self, g: &Graph, u: NodeId) -> Result<f64> {
        let report = self.eval_gain(g, u)?;
        let gain = report.gain;
        self.commit(g, report)?;
        Ok(gain)
    }

    /// Recomputes every stored probability and the spread directly from the
    /// seed set, discarding accumulated floating-point drift.
    pub fn refresh(&mut self, g: &Graph) {
        let (q1, q2) = direct_survival(g, self.diffusion, &self.is_seed);
        self.q1 = q1;
        if self.hops == Hops::Two {
            self.q2 = q2;
        }
        self.sigma = self.q_h().iter().map(|q| 1.0 - q).sum();
        self.commits_since_refresh = 0;
        self.version += 1;
    }
}

/// One- and two-hop survival complements computed from scratch for the seed
/// membership `is_seed`.
pub fn direct_survival(g: &Graph, diffusion: Diffusion, is_seed: &[bool]) -> (Vec<f64>, Vec<f64>) {
    let q1: Vec<f64> = g
        .nodes()
        .map(|v| {
            if is_seed[v.index()] {
                return 0.0;
            }
            let seeded = g.in_edges(v).filter(|(x, _)| is_seed[x.index()]);
            match diffusion {
                Diffusion::Ic => seeded.map(|(_, p)| 1.0 - p).product(),
                Diffusion::Lt => (1.0 - seeded.map(|(_, b)| b).sum::<f64>()).max(0.0),
            }
        })
        .collect();
    let q2 = g
        .nodes()
        .map(|v| {
            if is_seed[v.index()] {
                return 0.0;
            }
            let reach = g.in_edges(v).map(|(x, p)| p * (1.0 - q1[x.index()]));
            match diffusion {
                Diffusion::Ic => reach.map(|r| 1.0 - r).product(),
                Diffusion::Lt => (1.0 - reach.sum::<f64>()).max(0.0),
            }
        })
        .collect();
    (q1, q2)
}
