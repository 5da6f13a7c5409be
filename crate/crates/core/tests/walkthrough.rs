//! The 13-node example: threshold 0.66, traversal starting from the pendant
//! node N.

mod common;

use lincom::{detect, NodeType, RunConfig};

// node, INS at categorization, category, initial label, final label
const ROWS: [(&str, &str, NodeType, &str, &str); 13] = [
    ("N", "0.00", NodeType::Broker, "N", "L"),
    ("L", "0.25", NodeType::Broker, "L", "L"),
    ("I", "0.25", NodeType::Broker, "I", "F"),
    ("K", "1.00", NodeType::Community, "L", "L"),
    ("M", "0.67", NodeType::Community, "L", "L"),
    ("C", "0.33", NodeType::Broker, "C", "D"),
    ("B", "0.25", NodeType::Broker, "B", "D"),
    ("D", "0.33", NodeType::Broker, "D", "D"),
    ("A", "1.00", NodeType::Community, "D", "D"),
    ("E", "1.00", NodeType::Community, "D", "D"),
    ("F", "0.50", NodeType::Broker, "F", "F"),
    ("G", "1.00", NodeType::Community, "F", "F"),
    ("H", "1.00", NodeType::Community, "F", "F"),
];

#[test]
fn example_graph_shape() {
    let g = common::load("example13.txt");
    assert_eq!((g.node_count(), g.edge_count()), (13, 20));
    assert_eq!(g.degree(g.id("N").unwrap()), 1);
}

#[test]
fn table_rows_match() {
    let g = common::load("example13.txt");
    let id = |l: &str| g.id(l).unwrap();
    let d = detect(&g, &RunConfig::ins(0.66).with_start(id("N")));
    let t = &d.traversal;

    let order: Vec<&str> = t.discovery.iter().map(|&v| g.label(v)).collect();
    let expected: Vec<&str> = ROWS.iter().map(|r| r.0).collect();
    assert_eq!(order, expected);

    for (node, ins, category, initial, fin) in ROWS {
        let v = id(node);
        assert_eq!(format!("{:.2}", t.scores[v]), ins, "INS of {node}");
        assert_eq!(t.node_type(v), category, "category of {node}");
        assert_eq!(g.label(d.initial.label(v).unwrap()), initial, "initial label of {node}");
        assert_eq!(d.cover.label(v), d.cover.label(id(fin)), "final label of {node}");
    }
}

#[test]
fn stack_and_queue_snapshots() {
    let g = common::load("example13.txt");
    let d = detect(&g, &RunConfig::ins(0.66).with_start(g.id("N").unwrap()));
    let processed: Vec<&str> = d.traversal.processed.iter().map(|p| g.label(p.node)).collect();
    // C is popped before D, D before B, then F
    assert_eq!(processed, ["N", "L", "K", "M", "C", "D", "A", "E", "B", "F"]);
}

#[test]
fn three_final_communities() {
    let g = common::load("example13.txt");
    let d = detect(&g, &RunConfig::ins(0.66).with_start(g.id("N").unwrap()));
    let mut groups: Vec<Vec<&str>> = d
        .cover
        .groups()
        .iter()
        .map(|m| {
            let mut names: Vec<&str> = m.iter().map(|&v| g.label(v)).collect();
            names.sort_unstable();
            names
        })
        .collect();
    groups.sort();
    assert_eq!(groups, [vec!["A", "B", "C", "D", "E"], vec!["F", "G", "H", "I"], vec!["K", "L", "M", "N"]]);
}

#[test]
fn broker_allocation() {
    let g = common::load("example13.txt");
    let d = detect(&g, &RunConfig::ins(0.66).with_start(g.id("N").unwrap()));
    let alloc = |l: &str| d.allocated.label(g.id(l).unwrap()).map(|c| g.label(c).to_string());
    assert_eq!(alloc("I").as_deref(), Some("F"));
    assert_eq!(alloc("B").as_deref(), Some("D"));
    for seed in ["L", "D", "F"] {
        assert_eq!(alloc(seed).as_deref(), Some(seed));
    }
    // C touches one node of {L, K, M} and one of {D, A, E}; N touches no community node
    assert_eq!(alloc("C"), None);
    assert_eq!(alloc("N"), None);
}

#[test]
fn worked_conductance_examples() {
    use lincom::traversal::{classify_cond, ClusterAccumulator};
    let g = common::load("example13.txt");
    let id = |l: &str| g.id(l).unwrap();

    // S = {L, N}, candidate M
    let mut acc = ClusterAccumulator::seeded(&g, id("L"));
    acc.insert(&g, id("N"));
    let k_ts = acc.edges_into(&g, id("M"));
    let p = acc.params(&g, id("M"), k_ts);
    assert_eq!((p.k_s, p.k_t, p.k_ts, p.alpha, p.k_o), (5, 3, 1, 2, 32));
    let d = classify_cond(p.k_t, p.k_ts, p.k_s, p.k_o, p.alpha);
    assert_eq!(d.node_type, NodeType::Community);
    assert!((d.bound - 9.0 / 13.0).abs() < 1e-12);

    // S = {L, M, N}, candidate I
    acc.insert(&g, id("M"));
    let k_ts = acc.edges_into(&g, id("I"));
    let p = acc.params(&g, id("I"), k_ts);
    assert_eq!((p.k_s, p.k_t, p.k_ts, p.alpha, p.k_o), (8, 4, 1, 3, 28));
    let d = classify_cond(p.k_t, p.k_ts, p.k_s, p.k_o, p.alpha);
    assert_eq!(d.node_type, NodeType::Broker);
    assert_eq!(d.bound, 1.0);
}
