//! Cover quality measures.

use std::collections::{BTreeMap, HashSet};

use crate::graph::{Graph, NodeId};
use crate::refine::Cover;

/// Newman modularity of a cover, reading edge weights and self-loops.
/// Unassigned nodes count as singletons. An edgeless graph scores 0.
pub fn modularity(g: &Graph, cover: &Cover) -> f64 {
    let total = g.total_strength();
    if total == 0.0 {
        return 0.0;
    }
    let labels = cover.with_singletons().assignment();
    let mut inside: BTreeMap<usize, f64> = BTreeMap::new();
    let mut degree: BTreeMap<usize, f64> = BTreeMap::new();
    for v in 0..g.node_count() {
        let c = labels[v];
        let mut within = g.self_loop_weight(v);
        for (u, w) in g.weighted_neighbors(v) {
            if labels[u] == c {
                within += w;
            }
        }
        *inside.entry(c).or_insert(0.0) += within;
        *degree.entry(c).or_insert(0.0) += g.strength(v);
    }
    inside
        .iter()
        .map(|(c, &i)| {
            let d = degree[c] / total;
            i / total - d * d
        })
        .sum()
}

/// Conductance of `members` by direct enumeration of cut edges and volumes.
/// Returns 0 when either side has zero volume.
pub fn conductance_oracle(g: &Graph, members: &[NodeId]) -> f64 {
    let set: HashSet<NodeId> = members.iter().copied().collect();
    let mut cut = 0usize;
    let mut vol_in = 0usize;
    let mut vol_out = 0usize;
    for v in 0..g.node_count() {
        if set.contains(&v) {
            vol_in += g.degree(v);
            cut += g.neighbors(v).iter().filter(|u| !set.contains(u)).count();
        } else {
            vol_out += g.degree(v);
        }
    }
    let denom = vol_in.min(vol_out);
    if denom == 0 {
        0.0
    } else {
        cut as f64 / denom as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverStats {
    pub communities: usize,
    pub unassigned: usize,
    pub modularity: f64,
    /// Community size to number of communities of that size.
    pub size_histogram: BTreeMap<usize, usize>,
    pub largest: usize,
    pub smallest: usize,
    pub mean_size: f64,
    /// Conductance per community, communities ordered by smallest member.
    pub conductances: Vec<f64>,
}

pub fn cover_stats(g: &Graph, cover: &Cover) -> CoverStats {
    let groups = cover.groups();
    let mut size_histogram = BTreeMap::new();
    for m in &groups {
        *size_histogram.entry(m.len()).or_insert(0) += 1;
    }
    let k = groups.len();
    CoverStats {
        communities: k,
        unassigned: cover.unassigned().len(),
        modularity: modularity(g, cover),
        size_histogram,
        largest: groups.iter().map(Vec::len).max().unwrap_or(0),
        smallest: groups.iter().map(Vec::len).min().unwrap_or(0),
        mean_size: if k == 0 { 0.0 } else { cover.len() as f64 / k as f64 },
        conductances: groups.iter().map(|m| conductance_oracle(g, m)).collect(),
    }
}

/// Best modularity over all set partitions, by enumerating restricted
/// growth strings. Only usable for a dozen nodes or fewer.
pub fn max_modularity_exhaustive(g: &Graph) -> (f64, Cover) {
    let n = g.node_count();
    assert!(n <= 12, "exhaustive search is limited to 12 nodes, got {n}");
    let mut labels = vec![0usize; n];
    let mut best = (modularity(g, &Cover::from_labels(labels.clone())), labels.clone());
    if n == 0 {
        return (best.0, Cover::from_labels(best.1));
    }
    // labels[i] <= 1 + max(labels[..i])
    loop {
        let mut i = n - 1;
        loop {
            let cap = labels[..i].iter().max().map_or(0, |m| m + 1);
            if labels[i] < cap {
                labels[i] += 1;
                labels[i + 1..].iter_mut().for_each(|l| *l = 0);
                break;
            }
            if i == 0 {
                return (best.0, Cover::from_labels(best.1));
            }
            i -= 1;
        }
        let q = modularity(g, &Cover::from_labels(labels.clone()));
        if q > best.0 {
            best = (q, labels.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        Graph::from_unlabeled_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
    }

    #[test]
    fn two_triangles_bridge() {
        let g = two_triangles();
        let q = modularity(&g, &Cover::from_labels(vec![0, 0, 0, 1, 1, 1]));
        // 2 * (3/7 - (7/14)^2)
        assert!((q - (6.0 / 7.0 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn whole_graph_is_zero() {
        let g = two_triangles();
        assert!(modularity(&g, &Cover::from_labels(vec![0; 6])).abs() < 1e-12);
        assert_eq!(modularity(&Graph::from_unlabeled_edges(3, []), &Cover::singletons(3)), 0.0);
    }

    #[test]
    fn unassigned_counts_as_singleton() {
        let g = two_triangles();
        let partial = Cover::from_partial(vec![Some(0), Some(0), None, Some(1), Some(1), Some(1)]);
        let full = Cover::from_labels(vec![0, 0, 9, 1, 1, 1]);
        assert_eq!(modularity(&g, &partial), modularity(&g, &full));
    }

    #[test]
    fn oracle_conductance() {
        let g = two_triangles();
        assert!((conductance_oracle(&g, &[0, 1, 2]) - 1.0 / 7.0).abs() < 1e-12);
        assert_eq!(conductance_oracle(&g, &[0, 1, 2, 3, 4, 5]), 0.0);
    }

    #[test]
    fn exhaustive_finds_triangle_split() {
        let g = two_triangles();
        let (q, cover) = max_modularity_exhaustive(&g);
        assert!((q - (6.0 / 7.0 - 0.5)).abs() < 1e-12);
        assert_eq!(cover.assignment(), vec![0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn stats_histogram() {
        let g = two_triangles();
        let s = cover_stats(&g, &Cover::from_partial(vec![Some(0), Some(0), Some(0), Some(1), Some(1), None]));
        assert_eq!(s.communities, 3);
        assert_eq!(s.unassigned, 1);
        assert_eq!(s.size_histogram, BTreeMap::from([(1, 1), (2, 1), (3, 1)]));
        assert_eq!((s.smallest, s.largest), (1, 3));
    }
}
