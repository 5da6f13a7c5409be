//! Linear-time community detection by broker/community traversal.
//!
//! The pipeline is [`detect`]: a single traversal labels every node as a
//! broker or a community node and produces an initial cover, brokers are
//! then allocated to neighbouring communities, and the cover is polished by
//! multilevel modularity maximization on the reduced graph.

pub mod baselines;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod refine;
pub mod traversal;

use std::time::{Duration, Instant};

pub use graph::{load_edge_list, Graph, GraphError, LoadReport, NodeId};
pub use refine::Cover;
pub use traversal::{run_lincom, ConfigError, Method, NodeType, RunConfig, StartPolicy, Traversal};

/// Everything one run of the pipeline produced.
#[derive(Debug, Clone)]
pub struct Detection {
    pub traversal: Traversal,
    /// Labels straight from the traversal.
    pub initial: Cover,
    /// After broker allocation; may leave some brokers unassigned.
    pub allocated: Cover,
    /// Final disjoint cover, labels `0..k`.
    pub cover: Cover,
    pub modularity: f64,
    pub traversal_time: Duration,
    pub total_time: Duration,
}

impl Detection {
    pub fn community_count(&self) -> usize {
        self.cover.community_count()
    }
}

/// Runs traversal, broker allocation and, unless `cfg.run_modmax` is off,
/// modularity maximization. Panics on an invalid configuration.
pub fn detect(g: &Graph, cfg: &RunConfig) -> Detection {
    let started = Instant::now();
    let traversal = run_lincom(g, cfg);
    let traversal_time = started.elapsed();
    let initial = traversal.initial_cover();
    let allocated = refine::post_process(g, &initial, &traversal.states);
    let cover = if cfg.run_modmax {
        refine::finalize(&refine::mod_maximize(&refine::reduce(g, &allocated)))
    } else {
        refine::finalize(&allocated)
    };
    let total_time = started.elapsed();
    Detection {
        modularity: metrics::modularity(g, &cover),
        traversal,
        initial,
        allocated,
        cover,
        traversal_time,
        total_time,
    }
}
