//! Comparison algorithms.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::refine::{mod_maximize, reduce, Cover};

/// Asynchronous label propagation. Each sweep visits nodes in a freshly
/// shuffled order and gives every node the label most common among its
/// neighbours, smallest label on ties. Stops after a sweep with no change
/// or after `max_iters` sweeps.
pub fn label_propagation(g: &Graph, seed: u64, max_iters: usize) -> Cover {
    assert!(max_iters >= 1, "max_iters must be at least 1");
    let n = g.node_count();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0usize; n];
    let mut seen: Vec<usize> = Vec::new();

    for _ in 0..max_iters {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            if g.degree(v) == 0 {
                continue;
            }
            seen.clear();
            for &u in g.neighbors(v) {
                let l = labels[u];
                if counts[l] == 0 {
                    seen.push(l);
                }
                counts[l] += 1;
            }
            let mut best = (0, usize::MAX);
            for &l in &seen {
                if counts[l] > best.0 || (counts[l] == best.0 && l < best.1) {
                    best = (counts[l], l);
                }
                counts[l] = 0;
            }
            if best.1 != labels[v] {
                labels[v] = best.1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Cover::from_labels(labels)
}

/// Multilevel modularity maximization from the all-singletons cover.
pub fn louvain_baseline(g: &Graph) -> Cover {
    mod_maximize(&reduce(g, &Cover::singletons(g.node_count())))
}
