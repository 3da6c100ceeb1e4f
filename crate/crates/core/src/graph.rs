//! Directed graphs with per-edge propagation probabilities.
//!
//! A [`Graph`] stores both adjacency directions in compressed (CSR) form so
//! that the estimators can walk out-neighbors `N_u` and inverse neighbors
//! `I_v` with contiguous slices. Node ids are dense `0..n`; the identifiers
//! found in an input file are kept in a label table and mapped back on output.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on the incoming-weight sum of a node under the LT model.
pub const LT_TOLERANCE: f64 = 1e-9;

/// Probabilities drawn by the TRIVALENCY weighting.
pub const TRIVALENCY_LEVELS: [f64; 3] = [0.1, 0.01, 0.001];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Immutable directed graph with out- and in-adjacency views.
///
/// Both views hold the same edges with identical probabilities. Edges are
/// sorted by `(source, target)` in the out view and `(target, source)` in the
/// in view.
#[derive(Clone, Debug)]
pub struct Graph {
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    out_probs: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    in_probs: Vec<f64>,
    // position of each in-view slot in the out view
    in_to_out: Vec<usize>,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph over `node_count` dense nodes.
    ///
    /// Rejects self-loops, duplicate pairs, out-of-range endpoints and
    /// probabilities outside `[0, 1]`. Node labels are the dense indices.
    pub fn from_edges(node_count: usize, edges: &[(u32, u32, f64)]) -> Result<Graph> {
        let labels = (0..node_count as u64).collect();
        let lines: Vec<usize> = (1..=edges.len()).collect();
        Graph::build(labels, edges.to_vec(), &lines)
    }

    fn build(labels: Vec<u64>, mut edges: Vec<(u32, u32, f64)>, lines: &[usize]) -> Result<Graph> {
        let n = labels.len();
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("{n} nodes exceed the u32 id space")));
        }
        for (i, &(u, v, p)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::UnknownNode(w as u64));
                }
            }
            if u == v {
                return Err(Error::SelfLoop { line: lines[i], node: labels[u as usize] });
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityRange { value: p });
            }
        }

        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_unstable_by_key(|&i| (edges[i].0, edges[i].1, lines[i]));
        for w in order.windows(2) {
            let (a, b) = (edges[w[0]], edges[w[1]]);
            if a.0 == b.0 && a.1 == b.1 {
                return Err(Error::DuplicateEdge {
                    line: lines[w[1]],
                    src: labels[a.0 as usize],
                    dst: labels[a.1 as usize],
                });
            }
        }
        edges = order.iter().map(|&i| edges[i]).collect();

        let m = edges.len();
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(u, v, _) in &edges {
            out_offsets[u as usize + 1] += 1;
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }

        let out_targets = edges.iter().map(|e| NodeId(e.1)).collect();
        let out_probs: Vec<f64> = edges.iter().map(|e| e.2).collect();

        // Edges are sorted by source, so filling the in view in that order
        // leaves each in-list sorted by source as well.
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![NodeId(0); m];
        let mut in_to_out = vec![0usize; m];
        for (k, &(u, v, _)) in edges.iter().enumerate() {
            let slot = cursor[v as usize];
            cursor[v as usize] += 1;
            in_sources[slot] = NodeId(u);
            in_to_out[slot] = k;
        }
        let in_probs = in_to_out.iter().map(|&k| out_probs[k]).collect();

        Ok(Graph {
            out_offsets,
            out_targets,
            out_probs,
            in_offsets,
            in_sources,
            in_probs,
            in_to_out,
            labels,
        })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + Clone {
        (0..self.node_count() as u32).map(NodeId)
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u.index() < self.node_count()
    }

    /// Out-neighbors `N_u` with their edge probabilities.
    #[inline]
    pub fn out_edges(&self, u: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        let r = self.out_offsets[u.index()]..self.out_offsets[u.index() + 1];
        self.out_targets[r.clone()].iter().copied().zip(self.out_probs[r].iter().copied())
    }

    /// Inverse neighbors `I_v` with their edge probabilities.
    #[inline]
    pub fn in_edges(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        let r = self.in_offsets[v.index()]..self.in_offsets[v.index() + 1];
        self.in_sources[r.clone()].iter().copied().zip(self.in_probs[r].iter().copied())
    }

    #[inline]
    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.out_targets[self.out_offsets[u.index()]..self.out_offsets[u.index() + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.in_sources[self.in_offsets[v.index()]..self.in_offsets[v.index() + 1]]
    }

    #[inline]
    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_offsets[u.index() + 1] - self.out_offsets[u.index()]
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_offsets[v.index() + 1] - self.in_offsets[v.index()]
    }

    /// All edges as `(source, target, probability)` in out-view order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.nodes().flat_map(move |u| self.out_edges(u).map(move |(v, p)| (u, v, p)))
    }

    /// Probability of the edge `u -> v`, if present.
    pub fn probability(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let lo = self.out_offsets[u.index()];
        let targets = self.out_neighbors(u);
        targets.binary_search(&v).ok().map(|i| self.out_probs[lo + i])
    }

    /// Identifier of `u` in the source data.
    pub fn label(&self, u: NodeId) -> u64 {
        self.labels[u.index()]
    }

    /// Dense id of the node carrying `label` in the source data.
    pub fn node_by_label(&self, label: u64) -> Option<NodeId> {
        self.labels.binary_search(&label).ok().map(|i| NodeId(i as u32))
    }

    pub fn in_weight(&self, v: NodeId) -> f64 {
        self.in_edges(v).map(|(_, b)| b).sum()
    }

    /// Nodes whose incoming weight exceeds `1 + LT_TOLERANCE`. An empty
    /// result means the weights are admissible for the linear threshold model.
    pub fn validate_lt(&self) -> Vec<NodeId> {
        self.nodes().filter(|&v| self.in_weight(v) > 1.0 + LT_TOLERANCE).collect()
    }

    /// Reassigns every edge probability according to `model`, then scales
    /// and clamps to `[0, 1]`.
    pub fn apply_weight_model(mut self, model: &WeightModel) -> Result<Graph> {
        model.validate()?;
        match model.kind {
            WeightKind::WeightedCascade => {
                for u in 0..self.node_count() {
                    for k in self.out_offsets[u]..self.out_offsets[u + 1] {
                        let v = self.out_targets[k];
                        self.out_probs[k] = 1.0 / self.in_degree(v) as f64;
                    }
                }
            }
            WeightKind::Trivalency { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for p in self.out_probs.iter_mut() {
                    *p = TRIVALENCY_LEVELS[rng.random_range(0..TRIVALENCY_LEVELS.len())];
                }
            }
            WeightKind::Uniform(value) => self.out_probs.fill(value),
            WeightKind::FromFile => {}
        }
        if model.scale != 1.0 {
            for p in self.out_probs.iter_mut() {
                *p = (*p * model.scale).clamp(0.0, 1.0);
            }
        }
        for (slot, &k) in self.in_to_out.iter().enumerate() {
            self.in_probs[slot] = self.out_probs[k];
        }
        Ok(self)
    }
}

/// Parses a whitespace-separated edge list: `u v` or `u v p` per line,
/// with `#` comment lines and blank lines skipped.
///
/// Node identifiers that appear in the file are compacted, in ascending
/// order, onto `0..n`. Edges without a probability get `0.0` until a
/// [`WeightModel`] assigns one.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<Graph> {
    load_edge_list_sized(source, None)
}

/// Like [`load_edge_list`], but with `num_nodes` every id in `0..num_nodes`
/// exists (isolated vertices included) and larger ids are rejected.
pub fn load_edge_list_sized<R: BufRead>(source: R, num_nodes: Option<usize>) -> Result<Graph> {
    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                reason: format!("expected `u v` or `u v p`, found {} fields", fields.len()),
            });
        }
        let id = |s: &str| {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                reason: format!("invalid node id `{s}`"),
            })
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let p = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                reason: format!("invalid probability `{s}`"),
            })?,
            None => 0.0,
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parse { line: lineno, reason: format!("probability {p} outside [0, 1]") });
        }
        if u == v {
            return Err(Error::SelfLoop { line: lineno, node: u });
        }
        raw.push((u, v, p));
        lines.push(lineno);
    }

    let labels: Vec<u64> = match num_nodes {
        Some(n) => {
            if let Some((i, &(u, v, _))) =
                raw.iter().enumerate().find(|(_, e)| e.0 >= n as u64 || e.1 >= n as u64)
            {
                return Err(Error::Parse {
                    line: lines[i],
                    reason: format!("node id {} not below --num-nodes {n}", u.max(v)),
                });
            }
            (0..n as u64).collect()
        }
        None => {
            let mut ids: Vec<u64> = raw.iter().flat_map(|e| [e.0, e.1]).collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        }
    };
    let dense = |x: u64| labels.binary_search(&x).expect("label collected above") as u32;
    let edges = raw.iter().map(|&(u, v, p)| (dense(u), dense(v), p)).collect();
    Graph::build(labels, edges, &lines)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightKind {
    /// `p(u, v) = 1 / |I_v|`.
    WeightedCascade,
    /// Each edge draws uniformly from `{0.1, 0.01, 0.001}` with a ChaCha8
    /// stream seeded from `seed`.
    Trivalency { seed: u64 },
    Uniform(f64),
    /// Keep the probabilities read from the edge list.
    FromFile,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightModel {
    pub kind: WeightKind,
    pub scale: f64,
}

impl WeightModel {
    pub fn new(kind: WeightKind) -> Self {
        WeightModel { kind, scale: 1.0 }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::WeightModel(format!("scale factor must be positive, got {}", self.scale)));
        }
        if let WeightKind::Uniform(p) = self.kind {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::WeightModel(format!("uniform probability {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    /// Accepts `wc`, `tri:<seed>`, `uniform:<p>` and `file`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::WeightModel(format!("unrecognized weight model `{s}`"));
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        match (name, arg) {
            ("wc", None) => Ok(WeightKind::WeightedCascade),
            ("file", None) => Ok(WeightKind::FromFile),
            ("tri", Some(a)) => a.parse().map(|seed| WeightKind::Trivalency { seed }).map_err(|_| bad()),
            ("uniform", Some(a)) => {
                let p: f64 = a.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::WeightModel(format!("uniform probability {p} outside [0, 1]")));
                }
                Ok(WeightKind::Uniform(p))
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph> {
        load_edge_list(text.as_bytes())
    }

    #[test]
    fn parses_plain_pairs() {
        let g = parse("0 1\n1 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.probability(NodeId(0), NodeId(1)), Some(0.0));
    }

    #[test]
    fn parses_probabilities_and_comments() {
        let g = parse("# header\n0 1 0.5\n\n1 2 0.5\n").unwrap();
        assert_eq!(g.probability(NodeId(0), NodeId(1)), Some(0.5));
        assert_eq!(g.probability(NodeId(1), NodeId(2)), Some(0.5));
        assert_eq!(g.in_edges(NodeId(2)).collect::<Vec<_>>(), vec![(NodeId(1), 0.5)]);
    }

    #[test]
    fn rejects_self_loop_with_line() {
        match parse("0 0\n") {
            Err(Error::SelfLoop { line: 1, node: 0 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates_and_bad_lines() {
        assert!(matches!(parse("0 1\n1 2\n0 1\n"), Err(Error::DuplicateEdge { line: 3, .. })));
        assert!(matches!(parse("0 1\nx 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("0 1 1.5\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("0 1 0.1 7\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn compacts_sparse_ids_and_keeps_labels() {
        let g = parse("10 30\n30 20\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.label(NodeId(0)), 10);
        assert_eq!(g.label(NodeId(2)), 30);
        assert_eq!(g.node_by_label(20), Some(NodeId(1)));
        assert_eq!(g.node_by_label(11), None);
    }

    #[test]
    fn num_nodes_adds_isolated_vertices() {
        let g = load_edge_list_sized("0 1\n".as_bytes(), Some(5)).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.out_degree(NodeId(4)), 0);
        assert!(load_edge_list_sized("0 7\n".as_bytes(), Some(5)).is_err());
    }

    #[test]
    fn weighted_cascade_uses_in_degree() {
        let g = Graph::from_edges(4, &[(0, 3, 0.0), (1, 3, 0.0), (2, 3, 0.0)]).unwrap();
        let g = g.apply_weight_model(&WeightModel::new(WeightKind::WeightedCascade)).unwrap();
        for (_, b) in g.in_edges(NodeId(3)) {
            assert!((b - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!(g.validate_lt().is_empty());
    }

    #[test]
    fn uniform_with_scale() {
        let g = parse("0 1\n1 2\n2 0\n").unwrap();
        let m = WeightModel::new(WeightKind::Uniform(0.1)).with_scale(1.2);
        let g = g.apply_weight_model(&m).unwrap();
        for (_, _, p) in g.edges() {
            assert!((p - 0.12).abs() < 1e-15);
        }
    }

    #[test]
    fn scaling_clamps_to_one() {
        let g = parse("0 1 0.8\n").unwrap();
        let m = WeightModel::new(WeightKind::FromFile).with_scale(1.5);
        let g = g.apply_weight_model(&m).unwrap();
        assert_eq!(g.probability(NodeId(0), NodeId(1)), Some(1.0));
    }

    #[test]
    fn trivalency_is_deterministic() {
        let text = "0 1\n1 2\n2 3\n3 0\n0 2\n";
        let m = WeightModel::new(WeightKind::Trivalency { seed: 7 });
        let a: Vec<_> = parse(text).unwrap().apply_weight_model(&m).unwrap().edges().collect();
        let b: Vec<_> = parse(text).unwrap().apply_weight_model(&m).unwrap().edges().collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|e| TRIVALENCY_LEVELS.contains(&e.2)));
    }

    #[test]
    fn lt_violation_detected() {
        let g = Graph::from_edges(3, &[(0, 2, 0.7), (1, 2, 0.7)]).unwrap();
        assert_eq!(g.validate_lt(), vec![NodeId(2)]);
        let empty = Graph::from_edges(0, &[]).unwrap();
        assert!(empty.validate_lt().is_empty());
    }

    #[test]
    fn rejects_bad_models() {
        assert!("uniform:1.5".parse::<WeightKind>().is_err());
        assert!("tri:x".parse::<WeightKind>().is_err());
        assert!("bogus".parse::<WeightKind>().is_err());
        assert_eq!("tri:5".parse::<WeightKind>().unwrap(), WeightKind::Trivalency { seed: 5 });
        let g = parse("0 1\n").unwrap();
        let m = WeightModel::new(WeightKind::WeightedCascade).with_scale(0.0);
        assert!(g.apply_weight_model(&m).is_err());
    }
}
