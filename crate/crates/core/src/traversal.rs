//! Broker-stack / community-queue traversal that produces the initial cover.
//!
//! Nodes are categorized exactly once, when they are first reached from the
//! node being processed. Community nodes go to a FIFO queue and inherit the
//! label of the node that found them; brokers go to a LIFO stack and keep
//! their own label. The queue always drains before the stack is popped, so
//! the walk is breadth-first inside a community and depth-first across
//! community boundaries.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::refine::Cover;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeType {
    Uncategorized = 0,
    Broker = 1,
    Community = 2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeState {
    pub node_type: NodeType,
    pub covered: bool,
    pub community: NodeId,
}

impl NodeState {
    fn fresh(v: NodeId) -> Self {
        NodeState {
            node_type: NodeType::Uncategorized,
            covered: false,
            community: v,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct TraversalFrontier {
    pub broker_stack: Vec<NodeId>,
    pub community_queue: VecDeque<NodeId>,
    pub cover_count: usize,
}

/// Work counters. `edge_visits` counts adjacency entries scanned while
/// processing nodes taken from the frontier; `score_visits` counts entries
/// scanned to score candidates (INS or edges into the cluster).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub processed: usize,
    pub edge_visits: usize,
    pub score_visits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ins,
    Cond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartPolicy {
    LowestDegree,
    Explicit(NodeId),
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("threshold must lie in [0, 1], got {0}")]
    Threshold(f64),
    #[error("start node {0} is out of range for a graph with {1} nodes")]
    StartNode(NodeId, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    /// INS threshold `r`; ignored by the conductance method.
    pub threshold: f64,
    pub start: StartPolicy,
    pub run_modmax: bool,
    /// Only used by sampling sweeps. The traversal itself is deterministic.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: Method::Ins,
            threshold: 0.75,
            start: StartPolicy::LowestDegree,
            run_modmax: true,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn ins(threshold: f64) -> Self {
        RunConfig {
            threshold,
            ..Default::default()
        }
    }

    pub fn cond() -> Self {
        RunConfig {
            method: Method::Cond,
            ..Default::default()
        }
    }

    pub fn with_start(mut self, start: NodeId) -> Self {
        self.start = StartPolicy::Explicit(start);
        self
    }

    pub fn validate(&self, g: &Graph) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(ConfigError::Threshold(self.threshold));
        }
        if let StartPolicy::Explicit(v) = self.start {
            if v >= g.node_count() {
                return Err(ConfigError::StartNode(v, g.node_count()));
            }
        }
        Ok(())
    }
}

/// Where the driver took a node from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Start,
    Restart,
    Queue,
    Stack,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Processed {
    pub node: NodeId,
    pub source: Source,
    /// Community-queue length at the moment the node was taken.
    pub queue_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Categorization {
    pub node: NodeId,
    pub node_type: NodeType,
    /// INS at categorization time for the INS method; conductance of the
    /// growing cluster after the decision for the conductance method.
    pub score: f64,
}

/// Fraction of `v`'s neighbours that are covered. Degree-0 nodes score 0.
pub fn ins_score(g: &Graph, v: NodeId, states: &[NodeState]) -> f64 {
    let degree = g.degree(v);
    if degree == 0 {
        return 0.0;
    }
    let covered = g.neighbors(v).iter().filter(|&&u| states[u].covered).count();
    covered as f64 / degree as f64
}

/// Incremental conductance state of a growing cluster.
#[derive(Debug, Clone)]
pub struct ClusterAccumulator {
    label: NodeId,
    members: HashSet<NodeId>,
    volume: u64,
    cut_size: u64,
    total_volume: u64,
}

/// Inputs of the conductance decision for one candidate node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CondParams {
    pub k_t: u64,
    pub k_ts: u64,
    pub k_s: u64,
    pub k_o: u64,
    pub alpha: u64,
}

impl ClusterAccumulator {
    pub fn empty(g: &Graph, label: NodeId) -> Self {
        ClusterAccumulator {
            label,
            members: HashSet::new(),
            volume: 0,
            cut_size: 0,
            total_volume: 2 * g.edge_count() as u64,
        }
    }

    /// Cluster holding only `seed`.
    pub fn seeded(g: &Graph, seed: NodeId) -> Self {
        let mut acc = Self::empty(g, seed);
        acc.insert(g, seed);
        acc
    }

    pub fn label(&self) -> NodeId {
        self.label
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    pub fn volume(&self) -> u64 {
        self.volume
    }

    pub fn cut_size(&self) -> u64 {
        self.cut_size
    }

    pub fn total_volume(&self) -> u64 {
        self.total_volume
    }

    /// Number of edges from `t` into the cluster.
    pub fn edges_into(&self, g: &Graph, t: NodeId) -> u64 {
        g.neighbors(t).iter().filter(|&&w| self.contains(w)).count() as u64
    }

    /// Decision inputs for adding `t`, given `k_ts` edges from `t` into the cluster.
    pub fn params(&self, g: &Graph, t: NodeId, k_ts: u64) -> CondParams {
        debug_assert!(!self.contains(t));
        let k_t = g.degree(t) as u64;
        CondParams {
            k_t,
            k_ts,
            k_s: self.volume,
            k_o: self.total_volume - self.volume - k_t,
            alpha: self.cut_size - k_ts,
        }
    }

    /// Adds `t`. The cut loses the `k_ts` edges that become internal and
    /// gains the remaining `k_t - k_ts`.
    pub fn insert(&mut self, g: &Graph, t: NodeId) {
        let k_ts = self.edges_into(g, t);
        self.insert_with(g, t, k_ts);
    }

    fn insert_with(&mut self, g: &Graph, t: NodeId, k_ts: u64) {
        if !self.members.insert(t) {
            return;
        }
        let k_t = g.degree(t) as u64;
        self.volume += k_t;
        self.cut_size = self.cut_size - k_ts + (k_t - k_ts);
    }

    pub fn conductance(&self) -> f64 {
        ratio(self.cut_size, self.volume.min(self.total_volume - self.volume))
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Conductance of `members`, built up one node at a time.
pub fn conductance(g: &Graph, members: &[NodeId]) -> f64 {
    let mut acc = ClusterAccumulator::empty(g, members.first().copied().unwrap_or(0));
    for &v in members {
        acc.insert(g, v);
    }
    acc.conductance()
}

/// Which branch of the conductance rule applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CondCase {
    /// `k_S < k_t + k_O` and `k_S + k_t < k_O`.
    SmallCluster,
    /// `k_S < k_t + k_O` and `k_S + k_t >= k_O`.
    Crossover,
    /// `k_S >= k_t + k_O`.
    LargeCluster,
    /// The cluster or the rest of the graph has zero volume; both
    /// conductances are compared directly.
    ZeroVolume,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondDecision {
    pub node_type: NodeType,
    pub case: CondCase,
    /// Threshold that `k_ts` must strictly exceed (NaN for `ZeroVolume`).
    pub bound: f64,
}

/// Classifies a candidate as community (adding it strictly lowers the
/// cluster's conductance) or broker.
///
/// The comparison is done on integer cross-products, so a candidate sitting
/// exactly on the bound is a broker.
pub fn classify_cond(k_t: u64, k_ts: u64, k_s: u64, k_o: u64, alpha: u64) -> CondDecision {
    assert!(k_ts <= k_t, "k_ts ({k_ts}) exceeds k_t ({k_t})");
    let (kt, kts, ks, ko, a) = (k_t as i128, k_ts as i128, k_s as i128, k_o as i128, alpha as i128);

    if k_s == 0 || k_o == 0 {
        let old = (a + kts, ks.min(kt + ko));
        let new = (a + kt - kts, (ks + kt).min(ko));
        let node_type = if less(new, old) {
            NodeType::Community
        } else {
            NodeType::Broker
        };
        return CondDecision {
            node_type,
            case: CondCase::ZeroVolume,
            bound: f64::NAN,
        };
    }

    let (case, num, den) = if ks < kt + ko && ks + kt < ko {
        (CondCase::SmallCluster, kt * (ks - a), 2 * ks + kt)
    } else if ks < kt + ko {
        (CondCase::Crossover, ks * kt + a * (ks - ko), ks + ko)
    } else {
        (CondCase::LargeCluster, kt * (a + kt + ko), 2 * ko + kt)
    };
    // den > 0 in every branch once k_s and k_o are positive.
    let node_type = if kts * den > num {
        NodeType::Community
    } else {
        NodeType::Broker
    };
    CondDecision {
        node_type,
        case,
        bound: num as f64 / den as f64,
    }
}

/// `a.0 / a.1 < b.0 / b.1` with a zero denominator meaning a value of 0.
fn less(a: (i128, i128), b: (i128, i128)) -> bool {
    match (a.1 == 0, b.1 == 0) {
        (true, true) => false,
        (true, false) => 0 < b.0,
        (false, true) => a.0 < 0,
        (false, false) => a.0 * b.1 < b.0 * a.1,
    }
}

/// Mutable per-run state: node table, frontier, logs and counters.
#[derive(Debug, Clone)]
pub struct TraversalState {
    pub states: Vec<NodeState>,
    pub frontier: TraversalFrontier,
    pub scores: Vec<f64>,
    pub discovery: Vec<NodeId>,
    pub processed: Vec<Processed>,
    pub counters: Counters,
    pending: Vec<NodeId>,
}

impl TraversalState {
    pub fn new(n: usize) -> Self {
        TraversalState {
            states: (0..n).map(NodeState::fresh).collect(),
            frontier: TraversalFrontier::default(),
            scores: vec![f64::NAN; n],
            discovery: Vec::with_capacity(n),
            processed: Vec::with_capacity(n),
            counters: Counters::default(),
            pending: Vec::new(),
        }
    }

    /// Covers every uncovered neighbour of `v` and returns how many were
    /// newly covered. Uncategorized neighbours are remembered, in adjacency
    /// order, for the categorization step that follows.
    pub fn spread(&mut self, g: &Graph, v: NodeId) -> usize {
        self.pending.clear();
        let mut newly = 0;
        for &u in g.neighbors(v) {
            self.counters.edge_visits += 1;
            let state = &mut self.states[u];
            if !state.covered {
                state.covered = true;
                newly += 1;
            }
            if state.node_type == NodeType::Uncategorized {
                self.pending.push(u);
            }
        }
        self.frontier.cover_count += newly;
        newly
    }

    fn collect_uncategorized(&mut self, g: &Graph, v: NodeId) {
        self.pending.clear();
        for &u in g.neighbors(v) {
            self.counters.edge_visits += 1;
            if self.states[u].node_type == NodeType::Uncategorized {
                self.pending.push(u);
            }
        }
    }

    fn categorize(&mut self, u: NodeId, node_type: NodeType, label: NodeId, score: f64) {
        let state = &mut self.states[u];
        debug_assert_eq!(state.node_type, NodeType::Uncategorized);
        state.node_type = node_type;
        match node_type {
            NodeType::Broker => self.frontier.broker_stack.push(u),
            NodeType::Community => {
                state.community = label;
                self.frontier.community_queue.push_back(u);
            }
            NodeType::Uncategorized => unreachable!(),
        }
        self.scores[u] = score;
        self.discovery.push(u);
    }

    /// Spreads from `v`, then splits its uncategorized neighbours by INS
    /// against threshold `r` (strictly below `r` means broker).
    pub fn node_cat_ins(&mut self, g: &Graph, v: NodeId, r: f64) {
        self.spread(g, v);
        let label = self.states[v].community;
        let pending = std::mem::take(&mut self.pending);
        for &u in &pending {
            self.counters.score_visits += g.degree(u);
            let score = ins_score(g, u, &self.states);
            let node_type = if score < r {
                NodeType::Broker
            } else {
                NodeType::Community
            };
            self.categorize(u, node_type, label, score);
        }
        self.pending = pending;
    }

    /// Splits `v`'s uncategorized neighbours by whether joining `acc`
    /// strictly lowers its conductance. Categorized nodes count as covered.
    pub fn node_cat_cond(&mut self, g: &Graph, v: NodeId, acc: &mut ClusterAccumulator) {
        self.collect_uncategorized(g, v);
        let label = self.states[v].community;
        debug_assert_eq!(label, acc.label());
        let pending = std::mem::take(&mut self.pending);
        for &u in &pending {
            self.counters.score_visits += g.degree(u);
            let k_ts = acc.edges_into(g, u);
            let p = acc.params(g, u, k_ts);
            let decision = classify_cond(p.k_t, p.k_ts, p.k_s, p.k_o, p.alpha);
            if decision.node_type == NodeType::Community {
                acc.insert_with(g, u, k_ts);
            }
            self.states[u].covered = true;
            self.frontier.cover_count += 1;
            self.categorize(u, decision.node_type, label, acc.conductance());
        }
        self.pending = pending;
    }

    fn begin(&mut self, v: NodeId) {
        let state = &mut self.states[v];
        state.node_type = NodeType::Broker;
        if !state.covered {
            state.covered = true;
            self.frontier.cover_count += 1;
        }
        self.scores[v] = 0.0;
        self.discovery.push(v);
    }
}

/// Result of one traversal.
#[derive(Debug, Clone)]
pub struct Traversal {
    pub states: Vec<NodeState>,
    /// Score recorded when each node was categorized.
    pub scores: Vec<f64>,
    /// Nodes in categorization order.
    pub discovery: Vec<NodeId>,
    pub processed: Vec<Processed>,
    pub counters: Counters,
}

impl Traversal {
    /// Community label per node, straight from the traversal.
    pub fn initial_cover(&self) -> Cover {
        Cover::from_labels(self.states.iter().map(|s| s.community).collect())
    }

    pub fn node_type(&self, v: NodeId) -> NodeType {
        self.states[v].node_type
    }
}

/// Nodes ordered by `(degree, id)`.
fn degree_order(g: &Graph) -> Vec<NodeId> {
    let n = g.node_count();
    let max_degree = (0..n).map(|v| g.degree(v)).max().unwrap_or(0);
    let mut buckets = vec![Vec::new(); max_degree + 1];
    for v in 0..n {
        buckets[g.degree(v)].push(v);
    }
    buckets.into_iter().flatten().collect()
}

/// Runs the traversal and returns the categorized node table.
///
/// Panics if `cfg` is invalid for `g`; call [`RunConfig::validate`] first
/// when the configuration comes from user input.
pub fn run_lincom(g: &Graph, cfg: &RunConfig) -> Traversal {
    if let Err(e) = cfg.validate(g) {
        panic!("invalid run configuration: {e}");
    }
    let n = g.node_count();
    let mut st = TraversalState::new(n);
    let order = degree_order(g);
    let mut cursor = 0;
    let mut acc = ClusterAccumulator::empty(g, 0);

    let mut next = match (n, cfg.start) {
        (0, _) => None,
        (_, StartPolicy::Explicit(v)) => Some((v, Source::Start)),
        (_, StartPolicy::LowestDegree) => Some((order[0], Source::Start)),
    };

    while let Some((v, source)) = next {
        let queue_len = st.frontier.community_queue.len();
        st.processed.push(Processed {
            node: v,
            source,
            queue_len,
        });
        st.counters.processed += 1;
        if matches!(source, Source::Start | Source::Restart) {
            st.begin(v);
        }
        match cfg.method {
            Method::Ins => st.node_cat_ins(g, v, cfg.threshold),
            Method::Cond => {
                if source != Source::Queue {
                    acc = ClusterAccumulator::seeded(g, v);
                }
                st.node_cat_cond(g, v, &mut acc);
            }
        }

        if st.frontier.cover_count >= n {
            break;
        }
        next = if let Some(u) = st.frontier.community_queue.pop_front() {
            Some((u, Source::Queue))
        } else if let Some(u) = st.frontier.broker_stack.pop() {
            Some((u, Source::Stack))
        } else {
            while st.states[order[cursor]].covered {
                cursor += 1;
            }
            Some((order[cursor], Source::Restart))
        };
    }

    Traversal {
        states: st.states,
        scores: st.scores,
        discovery: st.discovery,
        processed: st.processed,
        counters: st.counters,
    }
}
