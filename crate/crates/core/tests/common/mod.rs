#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use lincom::{load_edge_list, Graph};
use proptest::prelude::*;

/// Dataset directory: `LINCOM_DATA_DIR` if set, else the workspace `data/`.
pub fn data_dir() -> PathBuf {
    std::env::var_os("LINCOM_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

pub fn try_load(name: &str) -> Option<Graph> {
    let file = File::open(data_dir().join(name)).ok()?;
    Some(load_edge_list(BufReader::new(file)).expect("dataset parses").0)
}

pub fn load(name: &str) -> Graph {
    try_load(name).unwrap_or_else(|| panic!("missing dataset {name} in {}", data_dir().display()))
}

/// Random simple graph on `1..=max_n` nodes.
pub fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=n * 3)
            .prop_map(move |pairs| Graph::from_unlabeled_edges(n, pairs.into_iter().filter(|(u, v)| u != v)))
    })
}

/// Random graph together with a label in `0..n` for every node.
pub fn graph_and_labels(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    small_graph(max_n).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), prop::collection::vec(0..n, n))
    })
}
