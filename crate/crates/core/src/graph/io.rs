//! Line-oriented graph file format.
//!
//! ```text
//! # comment
//! v <N>
//! c <vertex> <label>     (optional, label defaults to 0)
//! e <u> <v>
//! ```

use std::fmt::Write as _;

use super::{CommunityPartition, Graph};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(token: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{token}`")))
}

pub fn load_graph(text: &str) -> Result<(Graph, CommunityPartition)> {
    let mut vertex_count: Option<usize> = None;
    let mut labels: Vec<Option<usize>> = Vec::new();
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let tag = tokens.next().unwrap_or_default();
        match (tag, vertex_count) {
            ("v", None) => {
                let n = parse_id(tokens.next(), line, "vertex count")?;
                vertex_count = Some(n);
                labels = vec![None; n];
            }
            ("v", Some(_)) => return Err(parse_err(line, "repeated `v` line")),
            (_, None) => return Err(parse_err(line, "expected `v <N>` first")),
            ("c", Some(n)) => {
                let v = parse_id(tokens.next(), line, "vertex")?;
                let label = parse_id(tokens.next(), line, "label")?;
                if v >= n {
                    return Err(parse_err(line, format!("vertex {v} out of range")));
                }
                if labels[v].replace(label).is_some() {
                    return Err(parse_err(line, format!("vertex {v} labelled twice")));
                }
            }
            ("e", Some(n)) => {
                let u = parse_id(tokens.next(), line, "vertex")?;
                let v = parse_id(tokens.next(), line, "vertex")?;
                if u >= n || v >= n {
                    return Err(parse_err(line, format!("edge ({u}, {v}) out of range")));
                }
                if u == v {
                    return Err(parse_err(line, format!("self-loop at {u}")));
                }
                let key = (u.min(v), u.max(v));
                if !seen.insert(key) {
                    return Err(parse_err(
                        line,
                        format!("duplicate edge ({}, {})", key.0, key.1),
                    ));
                }
                edges.push(key);
            }
            (other, _) => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
        if tokens.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }

    let n = vertex_count.ok_or_else(|| parse_err(1, "missing `v <N>` line"))?;
    edges.sort_unstable();
    let graph = Graph::from_canonical(n, edges);
    let partition = CommunityPartition::new(labels.into_iter().map(|l| l.unwrap_or(0)).collect())?;
    Ok((graph, partition))
}

/// Canonical text form: every vertex gets a `c` line, edges in sorted order.
pub fn save_graph(g: &Graph, p: &CommunityPartition) -> String {
    let mut out = String::new();
    writeln!(out, "v {}", g.vertex_count()).unwrap();
    for (v, label) in p.labels().iter().enumerate() {
        writeln!(out, "c {v} {label}").unwrap();
    }
    for &(u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_smallest_graph() {
        let (g, p) = load_graph("v 2\nc 0 0\nc 1 0\ne 0 1").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn labels_default_to_zero_and_comments_are_skipped() {
        let (g, p) = load_graph("# header\nv 3\n\nc 2 1\ne 2 0\n# tail\n").unwrap();
        assert_eq!(g.edges(), &[(0, 2)]);
        assert_eq!(p.labels(), &[0, 0, 1]);
    }

    #[test]
    fn duplicate_edge_names_line() {
        let err = load_graph("v 3\ne 0 1\ne 1 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "duplicate edge (0, 1)".into()
            }
        );
    }

    #[test]
    fn malformed_inputs() {
        for (text, line) in [
            ("e 0 1\n", 1),
            ("v 2\ne 0 2\n", 2),
            ("v 2\ne 0\n", 2),
            ("v 2\ne 1 1\n", 2),
            ("v 2\nx 1\n", 2),
            ("v 2\nc 0 0\nc 0 1\n", 3),
            ("v 2\nc 5 0\n", 2),
            ("v x\n", 1),
            ("v 2\ne 0 1 7\n", 2),
        ] {
            match load_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn gap_in_labels_is_rejected() {
        assert!(matches!(
            load_graph("v 2\nc 1 2\n"),
            Err(Error::InvalidPartition(_))
        ));
    }
}
