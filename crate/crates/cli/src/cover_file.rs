//! Cover files: one `label<TAB>community` line per node, sorted by label.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::BufRead;

use lincom::{Cover, Graph};

use crate::CliError;

/// Numeric labels sort by value, anything else as strings.
fn label_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

pub fn render(g: &Graph, cover: &Cover) -> String {
    let labels = cover.with_singletons().assignment();
    let mut nodes: Vec<usize> = (0..g.node_count()).collect();
    nodes.sort_by(|&a, &b| label_order(g.label(a), g.label(b)));
    let mut out = String::new();
    for v in nodes {
        out.push_str(g.label(v));
        out.push('\t');
        out.push_str(&labels[v].to_string());
        out.push('\n');
    }
    out
}

/// Reads a cover for `g`. Every node must appear exactly once; community
/// ids are arbitrary tokens.
pub fn parse<R: BufRead>(g: &Graph, source: R) -> Result<Cover, CliError> {
    let mut labels: Vec<Option<usize>> = vec![None; g.node_count()];
    let mut ids: HashMap<String, usize> = HashMap::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.map_err(|e| CliError::Read("cover".into(), e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [node, community] = fields[..] else {
            return Err(CliError::CoverLine(i + 1, line.to_string()));
        };
        let v = g.id(node).ok_or_else(|| CliError::UnknownNode(node.to_string()))?;
        if labels[v].is_some() {
            return Err(CliError::DuplicateNode(node.to_string()));
        }
        let next = ids.len();
        labels[v] = Some(*ids.entry(community.to_string()).or_insert(next));
    }
    let missing: Vec<String> = (0..g.node_count())
        .filter(|&v| labels[v].is_none())
        .map(|v| g.label(v).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(CliError::MissingNodes(missing));
    }
    Ok(Cover::from_partial(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> Graph {
        Graph::from_edges(vec!["10".into(), "2".into(), "x".into()], [(0, 1), (1, 2)])
    }

    #[test]
    fn numeric_labels_sort_by_value() {
        let text = render(&path(), &Cover::from_labels(vec![0, 0, 1]));
        assert_eq!(text, "2\t0\n10\t0\nx\t1\n");
    }

    #[test]
    fn round_trip() {
        let g = path();
        let cover = Cover::from_labels(vec![0, 1, 1]);
        let back = parse(&g, render(&g, &cover).as_bytes()).unwrap();
        assert_eq!(lincom::refine::finalize(&back), cover);
    }

    #[test]
    fn rejects_bad_covers() {
        let g = path();
        assert!(matches!(parse(&g, "10\ta\n2\ta\n".as_bytes()), Err(CliError::MissingNodes(m)) if m == ["x"]));
        assert!(matches!(parse(&g, "11\ta\n".as_bytes()), Err(CliError::UnknownNode(_))));
        assert!(matches!(parse(&g, "10\ta\n10\tb\n".as_bytes()), Err(CliError::DuplicateNode(_))));
        assert!(matches!(parse(&g, "10 a b\n".as_bytes()), Err(CliError::CoverLine(1, _))));
    }
}
