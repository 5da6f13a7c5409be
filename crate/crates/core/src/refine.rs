//! Turning the traversal's initial cover into the final one: broker
//! allocation, reduction to a super-vertex graph and greedy modularity
//! maximization.

use std::collections::{BTreeMap, HashMap};

use crate::graph::{Graph, NodeId};
use crate::traversal::{NodeState, NodeType};

/// Moves must gain more than this much modularity.
pub const MOVE_TOLERANCE: f64 = 1e-12;

/// Community assignment. A node with no label is an unassigned broker and
/// counts as a singleton community everywhere a complete cover is needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    labels: Vec<Option<usize>>,
}

impl Cover {
    pub fn from_labels(labels: Vec<usize>) -> Self {
        Cover {
            labels: labels.into_iter().map(Some).collect(),
        }
    }

    pub fn from_partial(labels: Vec<Option<usize>>) -> Self {
        Cover { labels }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Self {
        Self::from_labels((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: NodeId) -> Option<usize> {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn unassigned(&self) -> Vec<NodeId> {
        (0..self.len()).filter(|&v| self.labels[v].is_none()).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.labels.iter().all(Option::is_some)
    }

    /// Label to sorted members, assigned nodes only.
    pub fn communities(&self) -> BTreeMap<usize, Vec<NodeId>> {
        let mut index: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for (v, label) in self.labels.iter().enumerate() {
            if let Some(l) = label {
                index.entry(*l).or_default().push(v);
            }
        }
        index
    }

    /// Distinct labels plus one per unassigned node.
    pub fn community_count(&self) -> usize {
        self.communities().len() + self.unassigned().len()
    }

    /// Gives each unassigned node a fresh label of its own.
    pub fn with_singletons(&self) -> Cover {
        let mut next = self.labels.iter().flatten().max().map_or(0, |m| m + 1);
        let labels = self
            .labels
            .iter()
            .map(|l| {
                l.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        Cover::from_labels(labels)
    }

    /// Labels of a complete cover. Panics if some node is unassigned.
    pub fn assignment(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(v, l)| l.unwrap_or_else(|| panic!("node {v} is unassigned")))
            .collect()
    }

    /// Members grouped by community, groups ordered by smallest member.
    pub fn groups(&self) -> Vec<Vec<NodeId>> {
        let mut groups: Vec<Vec<NodeId>> = self.with_singletons().communities().into_values().collect();
        groups.sort_unstable_by_key(|m| m[0]);
        groups
    }
}

/// Allocates each broker to the community with the highest belonging
/// probability `|N(v) ∩ C| / |C|`.
///
/// Only communities that contain at least one community node are
/// candidates, and brokers that seeded such a community keep it. A broker
/// with no community-node neighbour, or with several communities tied for
/// the maximum, is left unassigned. Probabilities are computed against the
/// input cover, so the result does not depend on broker order.
pub fn post_process(g: &Graph, cover: &Cover, states: &[NodeState]) -> Cover {
    let index = cover.communities();
    let mut seeded: HashMap<usize, usize> = HashMap::new();
    for (&label, members) in &index {
        if members.iter().any(|&v| states[v].node_type == NodeType::Community) {
            seeded.insert(label, members.len());
        }
    }

    let mut out = cover.clone();
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for v in 0..g.node_count() {
        if states[v].node_type != NodeType::Broker {
            continue;
        }
        if cover.label(v).is_some_and(|l| seeded.contains_key(&l)) {
            continue;
        }
        counts.clear();
        let mut community_neighbor = false;
        for &u in g.neighbors(v) {
            community_neighbor |= states[u].node_type == NodeType::Community;
            let Some(label) = cover.label(u) else { continue };
            if !seeded.contains_key(&label) {
                continue;
            }
            match counts.iter_mut().find(|(l, _)| *l == label) {
                Some((_, c)) => *c += 1,
                None => counts.push((label, 1)),
            }
        }
        out.labels[v] = if community_neighbor {
            unique_best(&counts, &seeded)
        } else {
            None
        };
    }
    out
}

fn unique_best(counts: &[(usize, usize)], sizes: &HashMap<usize, usize>) -> Option<usize> {
    let mut best: Option<(usize, usize, usize)> = None;
    let mut tied = false;
    for &(label, hits) in counts {
        let size = sizes[&label];
        match best {
            None => best = Some((label, hits, size)),
            Some((_, bh, bs)) => {
                // hits / size vs bh / bs
                let lhs = hits * bs;
                let rhs = bh * size;
                if lhs > rhs {
                    best = Some((label, hits, size));
                    tied = false;
                } else if lhs == rhs {
                    tied = true;
                }
            }
        }
    }
    if tied {
        None
    } else {
        best.map(|(l, _, _)| l)
    }
}

/// Graph with one super-vertex per community.
#[derive(Debug, Clone)]
pub struct ReducedGraph {
    pub graph: Graph,
    /// Super-vertex id to the community label it came from.
    pub label_map: Vec<usize>,
    /// Super-vertex id to the original nodes it stands for.
    pub members: Vec<Vec<NodeId>>,
}

/// Contracts every community to a super-vertex. Internal edges become a
/// self-loop of twice their weight, edges between two communities add up
/// into one cross edge. Unassigned nodes become singleton communities.
/// Super-vertices are numbered by smallest member.
pub fn reduce(g: &Graph, cover: &Cover) -> ReducedGraph {
    let complete = cover.with_singletons();
    let mut groups: Vec<(usize, Vec<NodeId>)> = complete.communities().into_iter().collect();
    groups.sort_unstable_by_key(|(_, m)| m[0]);

    let mut super_of = vec![0usize; g.node_count()];
    for (sv, (_, members)) in groups.iter().enumerate() {
        for &v in members {
            super_of[v] = sv;
        }
    }

    let k = groups.len();
    let mut self_loops = vec![0.0; k];
    let mut cross: HashMap<(usize, usize), f64> = HashMap::new();
    for v in 0..g.node_count() {
        let sv = super_of[v];
        self_loops[sv] += g.self_loop_weight(v);
        for (u, w) in g.weighted_neighbors(v) {
            let su = super_of[u];
            if su == sv {
                // each internal edge is seen from both ends
                self_loops[sv] += w;
            } else if v < u {
                *cross.entry((sv.min(su), sv.max(su))).or_insert(0.0) += w;
            }
        }
    }
    let mut edges: Vec<(usize, usize, f64)> = cross.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    edges.sort_unstable_by_key(|&(a, b, _)| (a, b));

    let label_map: Vec<usize> = groups.iter().map(|(l, _)| *l).collect();
    let names = label_map.iter().map(|l| format!("c{l}")).collect();
    ReducedGraph {
        graph: Graph::from_weighted(names, edges, self_loops),
        label_map,
        members: groups.into_iter().map(|(_, m)| m).collect(),
    }
}

/// Working partition of a (weighted) graph's vertices.
#[derive(Debug, Clone)]
pub struct Partition {
    community: Vec<usize>,
    totals: Vec<f64>,
    strength: Vec<f64>,
    total_weight: f64,
}

impl Partition {
    pub fn singletons(g: &Graph) -> Self {
        let strength: Vec<f64> = (0..g.node_count()).map(|v| g.strength(v)).collect();
        Partition {
            community: (0..g.node_count()).collect(),
            totals: strength.clone(),
            total_weight: strength.iter().sum(),
            strength,
        }
    }

    /// Partition with explicit community ids, each below `g.node_count()`.
    pub fn from_assignment(g: &Graph, community: Vec<usize>) -> Self {
        let mut part = Self::singletons(g);
        part.totals.iter_mut().for_each(|t| *t = 0.0);
        for (v, &c) in community.iter().enumerate() {
            part.totals[c] += part.strength[v];
        }
        part.community = community;
        part
    }

    pub fn community(&self, v: NodeId) -> usize {
        self.community[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.community
    }

    pub fn move_node(&mut self, v: NodeId, target: usize) {
        let from = self.community[v];
        self.totals[from] -= self.strength[v];
        self.totals[target] += self.strength[v];
        self.community[v] = target;
    }
}

/// `2 (k_to - k_from) / W - 2 s (tot_to - tot_from_without_v) / W^2`
fn move_gain(k_to: f64, k_from: f64, s: f64, tot_to: f64, tot_from_rest: f64, w: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    2.0 * (k_to - k_from) / w - 2.0 * s * (tot_to - tot_from_rest) / (w * w)
}

/// Modularity change from moving `v` into community `target`.
pub fn delta_modularity(g: &Graph, part: &Partition, v: NodeId, target: usize) -> f64 {
    let from = part.community(v);
    if from == target {
        return 0.0;
    }
    let (mut k_to, mut k_from) = (0.0, 0.0);
    for (u, w) in g.weighted_neighbors(v) {
        let c = part.community(u);
        if c == target {
            k_to += w;
        } else if c == from {
            k_from += w;
        }
    }
    let s = part.strength[v];
    move_gain(k_to, k_from, s, part.totals[target], part.totals[from] - s, part.total_weight)
}

/// Sweeps vertices in id order, moving each to the neighbouring community
/// with the largest gain, until a sweep moves nothing. Returns whether any
/// vertex moved.
fn local_moving(g: &Graph, part: &mut Partition) -> bool {
    let n = g.node_count();
    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut any = false;
    loop {
        let mut moved = false;
        for v in 0..n {
            let from = part.community(v);
            touched.clear();
            for (u, w) in g.weighted_neighbors(v) {
                let c = part.community(u);
                if weight_to[c] == 0.0 && !touched.contains(&c) {
                    touched.push(c);
                }
                weight_to[c] += w;
            }
            let s = part.strength[v];
            let k_from = weight_to[from];
            let rest = part.totals[from] - s;
            let mut best: Option<(f64, usize)> = None;
            for &c in &touched {
                if c == from {
                    continue;
                }
                let gain = move_gain(weight_to[c], k_from, s, part.totals[c], rest, part.total_weight);
                best = match best {
                    Some((bg, bc)) if bg > gain || (bg == gain && bc < c) => Some((bg, bc)),
                    _ => Some((gain, c)),
                };
            }
            for &c in &touched {
                weight_to[c] = 0.0;
            }
            if let Some((gain, c)) = best {
                if gain > MOVE_TOLERANCE {
                    part.move_node(v, c);
                    moved = true;
                }
            }
        }
        if !moved {
            return any;
        }
        any = true;
    }
}

/// Multilevel greedy modularity maximization starting from the
/// super-vertices of `rg`; returns a complete cover of the original nodes.
pub fn mod_maximize(rg: &ReducedGraph) -> Cover {
    let original_n: usize = rg.members.iter().map(Vec::len).sum();
    let mut graph = rg.graph.clone();
    let mut members = rg.members.clone();
    loop {
        let mut part = Partition::singletons(&graph);
        if !local_moving(&graph, &mut part) {
            break;
        }
        let next = reduce(&graph, &Cover::from_labels(part.assignment().to_vec()));
        members = next
            .members
            .iter()
            .map(|svs| {
                let mut m: Vec<NodeId> = svs.iter().flat_map(|&sv| members[sv].iter().copied()).collect();
                m.sort_unstable();
                m
            })
            .collect();
        graph = next.graph;
    }
    let mut labels = vec![0; original_n];
    for (c, ms) in members.iter().enumerate() {
        for &v in ms {
            labels[v] = c;
        }
    }
    Cover::from_labels(labels)
}

/// Complete cover with labels renumbered `0..k` in order of each
/// community's smallest member.
pub fn finalize(cover: &Cover) -> Cover {
    let mut labels = vec![0; cover.len()];
    for (c, members) in cover.groups().iter().enumerate() {
        for &v in members {
            labels[v] = c;
        }
    }
    Cover::from_labels(labels)
}
