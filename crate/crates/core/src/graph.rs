//! Immutable undirected graph in compressed adjacency form.
//!
//! Input graphs are simple and unweighted: every adjacency entry carries
//! weight 1 and there are no self-loops. Weighted adjacency and per-node
//! self-loop weights exist only for super-vertex graphs built by
//! [`crate::refine::reduce`].

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, Write};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Dense internal node id in `[0, n)`.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: expected two whitespace-separated node labels, found {found} token(s)")]
    Parse { line: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Counters collected while parsing an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub comments: usize,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    weights: Vec<f64>,
    self_loop_weight: Vec<f64>,
    edge_count: usize,
    labels: Vec<String>,
    ids: HashMap<String, NodeId>,
}

impl Graph {
    /// Graph with no nodes.
    pub fn empty() -> Self {
        Self::from_edges(Vec::new(), std::iter::empty())
    }

    /// Builds an unweighted simple graph over `labels.len()` nodes.
    ///
    /// Self-loops and repeated edges are dropped.
    pub fn from_edges<I>(labels: Vec<String>, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut pairs: Vec<(NodeId, NodeId)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| {
                assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
                if u < v {
                    (u, v)
                } else {
                    (v, u)
                }
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let weighted = pairs.into_iter().map(|(u, v)| (u, v, 1.0));
        Self::build(labels, weighted, vec![0.0; n])
    }

    /// Builds a graph with unlabelled nodes named by their internal id.
    pub fn from_unlabeled_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// Builds a weighted graph. Each undirected pair must appear once with
    /// `u < v`; self-loop weights are supplied separately.
    pub(crate) fn from_weighted(
        labels: Vec<String>,
        edges: Vec<(NodeId, NodeId, f64)>,
        self_loop_weight: Vec<f64>,
    ) -> Self {
        Self::build(labels, edges.into_iter(), self_loop_weight)
    }

    fn build<I>(labels: Vec<String>, edges: I, self_loop_weight: Vec<f64>) -> Self
    where
        I: Iterator<Item = (NodeId, NodeId, f64)>,
    {
        let n = labels.len();
        let edges: Vec<(NodeId, NodeId, f64)> = edges.collect();
        let mut counts = vec![0usize; n + 1];
        for &(u, v, _) in &edges {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        for &(u, v, w) in &edges {
            targets[fill[u]] = v;
            weights[fill[u]] = w;
            fill[u] += 1;
            targets[fill[v]] = u;
            weights[fill[v]] = w;
            fill[v] += 1;
        }
        for v in 0..n {
            let range = offsets[v]..offsets[v + 1];
            let mut row: Vec<(NodeId, f64)> = targets[range.clone()]
                .iter()
                .copied()
                .zip(weights[range.clone()].iter().copied())
                .collect();
            row.sort_unstable_by_key(|&(t, _)| t);
            for (slot, (t, w)) in range.zip(row) {
                targets[slot] = t;
                weights[slot] = w;
            }
        }
        let ids = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Graph {
            offsets,
            targets,
            weights,
            self_loop_weight,
            edge_count: edges.len(),
            labels,
            ids,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of undirected edges, self-loops excluded.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Sorted neighbour ids of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge weights aligned with [`Graph::neighbors`].
    pub fn neighbor_weights(&self, v: NodeId) -> &[f64] {
        &self.weights[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Iterator over `(neighbor, weight)` pairs.
    pub fn weighted_neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.neighbors(v)
            .iter()
            .copied()
            .zip(self.neighbor_weights(v).iter().copied())
    }

    /// Number of distinct neighbours.
    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn self_loop_weight(&self, v: NodeId) -> f64 {
        self.self_loop_weight[v]
    }

    /// Weighted degree: incident edge weights plus the self-loop weight.
    pub fn strength(&self, v: NodeId) -> f64 {
        self.neighbor_weights(v).iter().sum::<f64>() + self.self_loop_weight[v]
    }

    /// Sum of all strengths, i.e. twice the total edge weight.
    pub fn total_strength(&self) -> f64 {
        (0..self.node_count()).map(|v| self.strength(v)).sum()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Option<NodeId> {
        self.ids.get(label).copied()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Uniformly samples `floor(fraction * m)` edges without replacement.
    /// The node set and labels are kept, so isolated nodes survive.
    pub fn sample_edges(&self, fraction: f64, seed: u64) -> Graph {
        assert!(
            fraction > 0.0 && fraction <= 1.0,
            "sample fraction must lie in (0, 1], got {fraction}"
        );
        let all: Vec<(NodeId, NodeId)> = self.edges().collect();
        let keep = (fraction * all.len() as f64).floor() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = index::sample(&mut rng, all.len(), keep).into_vec();
        picked.sort_unstable();
        Graph::from_edges(self.labels.clone(), picked.into_iter().map(|i| all[i]))
    }

    /// Maximal connected node sets, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            let mut members = Vec::new();
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for &u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    /// Writes the edge list in the same format [`load_edge_list`] reads.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{}\t{}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` and blank lines are skipped. Labels are mapped to
/// dense ids in order of first appearance.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<(Graph, LoadReport), GraphError> {
    let mut report = LoadReport::default();
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();

    let mut intern = |label: &str, labels: &mut Vec<String>| -> NodeId {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = labels.len();
        labels.push(label.to_owned());
        ids.insert(label.to_owned(), id);
        id
    };

    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        report.lines += 1;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            report.comments += 1;
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::Parse {
                line: idx + 1,
                found: tokens.len(),
            });
        }
        let u = intern(tokens[0], &mut labels);
        let v = intern(tokens[1], &mut labels);
        if u == v {
            report.self_loops += 1;
            continue;
        }
        edges.push(if u < v { (u, v) } else { (v, u) });
    }

    let raw = edges.len();
    edges.sort_unstable();
    edges.dedup();
    report.duplicate_edges = raw - edges.len();
    Ok((Graph::from_edges(labels, edges), report))
}
