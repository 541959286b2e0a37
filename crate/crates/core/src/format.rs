//! Text graph format.
//!
//! ```text
//! # comment lines and trailing comments are ignored
//! n m
//! u v w
//! ...
//! ```
//!
//! The header gives the vertex count `n` and edge count `m`; each of the
//! following `m` records is an edge with 0-based endpoint ids and an
//! integer or `p/q` rational weight, whitespace separated.
//! `parse_graph(serialize_graph(g)) == g` for every valid graph.

use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, GraphError, NodeId, WeightedGraph};
use crate::weight::EdgeWeight;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: malformed record: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("header says {expected} edges but found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("missing `n m` header line")]
    MissingHeader,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn malformed(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        line,
        reason: reason.into(),
    }
}

/// Parses the text format above.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, FormatError> {
    // (line number, tokens) for every line that has content
    let records = text.lines().enumerate().filter_map(|(idx, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            None
        } else {
            Some((idx + 1, tokens))
        }
    });

    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Edge> = Vec::new();
    let mut edge_lines = 0usize;
    for (line, tokens) in records {
        match header {
            None => {
                if tokens.len() != 2 {
                    return Err(malformed(line, "expected `n m` header"));
                }
                let n = parse_count(line, tokens[0], "vertex count")?;
                let m = parse_count(line, tokens[1], "edge count")?;
                header = Some((n, m));
            }
            Some((_, expected)) => {
                edge_lines += 1;
                if edge_lines > expected {
                    return Err(FormatError::EdgeCountMismatch {
                        expected,
                        found: edge_lines,
                    });
                }
                if tokens.len() != 3 {
                    return Err(malformed(line, "expected `u v w` edge record"));
                }
                let u = parse_node(line, tokens[0])?;
                let v = parse_node(line, tokens[1])?;
                let w = EdgeWeight::from_str(tokens[2])?;
                edges.push(Edge::new(u, v, w)?);
            }
        }
    }

    let (n, m) = header.ok_or(FormatError::MissingHeader)?;
    if edge_lines != m {
        return Err(FormatError::EdgeCountMismatch {
            expected: m,
            found: edge_lines,
        });
    }
    Ok(WeightedGraph::new(n, edges)?)
}

fn parse_count(line: usize, token: &str, what: &str) -> Result<usize, FormatError> {
    token
        .parse::<usize>()
        .map_err(|_| malformed(line, format!("invalid {what} {token:?}")))
}

fn parse_node(line: usize, token: &str) -> Result<NodeId, FormatError> {
    token
        .parse::<u32>()
        .map(NodeId)
        .map_err(|_| malformed(line, format!("invalid node id {token:?}")))
}

/// Serializes a graph; edges appear in canonical `(u, v)` order.
pub fn serialize_graph(g: &WeightedGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.u(), e.v(), e.weight()));
    }
    out
}
