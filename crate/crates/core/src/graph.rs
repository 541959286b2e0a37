//! Weighted-graph data model and the canonical total edge order.
//!
//! Graphs are simple, undirected, and immutable after construction. Edges
//! carry strictly positive exact weights. Ties between equal weights are
//! broken by endpoint identities so that "heavier" is a strict total order
//! on the edges of any graph; all algorithms in this crate resolve
//! "locally heaviest" against this one order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::weight::EdgeWeight;

/// Identifier of a vertex; ids in a graph with `n` vertices are `0..n`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for NodeId {
    fn from(id: u32) -> Self {
        NodeId(id)
    }
}

/// Errors from graph and weight construction. Each invalid input is
/// reported distinctly.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at node {node}")]
    SelfLoop { node: NodeId },
    #[error("duplicate edge between {u} and {v}")]
    DuplicateEdge { u: NodeId, v: NodeId },
    #[error("endpoint {node} out of range for {vertex_count} vertices")]
    EndpointOutOfRange { node: NodeId, vertex_count: usize },
    #[error("edge weight {value} is not positive")]
    NonPositiveWeight { value: String },
    #[error("weight denominator is zero")]
    ZeroDenominator,
    #[error("malformed weight {text:?}")]
    MalformedWeight { text: String },
}

/// An undirected weighted edge, stored canonically with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    u: NodeId,
    v: NodeId,
    weight: EdgeWeight,
}

impl Edge {
    /// Canonicalizes the endpoint order; rejects self-loops.
    pub fn new(a: NodeId, b: NodeId, weight: EdgeWeight) -> Result<Self, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop { node: a });
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(Edge { u, v, weight })
    }

    /// Smaller endpoint id.
    pub fn u(&self) -> NodeId {
        self.u
    }

    /// Larger endpoint id.
    pub fn v(&self) -> NodeId {
        self.v
    }

    pub fn weight(&self) -> &EdgeWeight {
        &self.weight
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }

    pub fn touches(&self, node: NodeId) -> bool {
        self.u == node || self.v == node
    }

    /// The endpoint opposite `node`, if `node` is an endpoint.
    pub fn other_endpoint(&self, node: NodeId) -> Option<NodeId> {
        if node == self.u {
            Some(self.v)
        } else if node == self.v {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }

    /// Position of this edge in the canonical total order: heavier weight
    /// first, ties broken by smaller `u`, then smaller `v`. `Ordering::Less`
    /// means "precedes", i.e. this edge is the heavier one.
    pub fn order_cmp(&self, other: &Edge) -> Ordering {
        other
            .weight
            .cmp(&self.weight)
            .then(self.u.cmp(&other.u))
            .then(self.v.cmp(&other.v))
    }

    pub fn order_key(&self) -> EdgeOrderKey {
        EdgeOrderKey {
            weight: self.weight.clone(),
            lo: self.u,
            hi: self.v,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},w={})", self.u, self.v, self.weight)
    }
}

/// Sort key inducing the strict total edge order, even with duplicate
/// weights: descending weight, then ascending smaller endpoint, then
/// ascending larger endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrderKey {
    pub weight: EdgeWeight,
    pub lo: NodeId,
    pub hi: NodeId,
}

impl Ord for EdgeOrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .weight
            .cmp(&self.weight)
            .then(self.lo.cmp(&other.lo))
            .then(self.hi.cmp(&other.hi))
    }
}

impl PartialOrd for EdgeOrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// True iff `a` strictly precedes `b` in the canonical edge order.
///
/// For distinct canonical edges exactly one of `heavier(a, b)` and
/// `heavier(b, a)` holds.
pub fn heavier(a: &Edge, b: &Edge) -> bool {
    a.order_cmp(b) == Ordering::Less
}

/// An undirected simple graph with exact positive edge weights.
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertex_count: usize,
    /// Sorted by `(u, v)`.
    edges: Vec<Edge>,
    /// Per vertex: `(neighbor, edge index)`, sorted by neighbor id.
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl WeightedGraph {
    /// Validates and builds a graph. Rejects self-loops, parallel edges and
    /// out-of-range endpoints; non-positive weights are already unrepresentable
    /// in [`EdgeWeight`].
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        let mut seen: BTreeMap<(NodeId, NodeId), ()> = BTreeMap::new();
        for e in &edges {
            for node in [e.u(), e.v()] {
                if node.index() >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange { node, vertex_count });
                }
            }
            if seen.insert(e.endpoints(), ()).is_some() {
                return Err(GraphError::DuplicateEdge { u: e.u(), v: e.v() });
            }
        }
        edges.sort_by_key(|e| e.endpoints());
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (idx, e) in edges.iter().enumerate() {
            adjacency[e.u().index()].push((e.v(), idx));
            adjacency[e.v().index()].push((e.u(), idx));
        }
        for list in &mut adjacency {
            list.sort_by_key(|(n, _)| *n);
        }
        Ok(WeightedGraph {
            vertex_count,
            edges,
            adjacency,
        })
    }

    /// Convenience constructor from `(u, v, integer weight)` triples.
    pub fn from_triples(
        vertex_count: usize,
        triples: &[(u32, u32, i64)],
    ) -> Result<Self, GraphError> {
        let edges = triples
            .iter()
            .map(|&(u, v, w)| Edge::new(NodeId(u), NodeId(v), EdgeWeight::from_integer(w)?))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(vertex_count, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges, sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.vertex_count as u32).map(NodeId)
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node.index()].len()
    }

    /// Neighbors of `node` in ascending id order.
    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency[node.index()].iter().map(|(n, _)| *n)
    }

    pub fn are_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.edge_between(a, b).is_some()
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<&Edge> {
        if a.index() >= self.vertex_count {
            return None;
        }
        let list = &self.adjacency[a.index()];
        list.binary_search_by_key(&b, |(n, _)| *n)
            .ok()
            .map(|pos| &self.edges[list[pos].1])
    }

    /// Edge indices incident to `node`, in neighbor order.
    pub fn incident_edge_indices(&self, node: NodeId) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[node.index()].iter().map(|(_, idx)| *idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i64) -> EdgeWeight {
        EdgeWeight::from_integer(n).unwrap()
    }

    #[test]
    fn builds_single_edge_graph() {
        let g = WeightedGraph::from_triples(2, &[(0, 1, 7)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].weight(), &w(7));
    }

    #[test]
    fn rejects_self_loop() {
        assert_eq!(
            WeightedGraph::from_triples(3, &[(0, 0, 1)]).unwrap_err(),
            GraphError::SelfLoop { node: NodeId(0) }
        );
    }

    #[test]
    fn rejects_non_positive_weight() {
        assert!(matches!(
            WeightedGraph::from_triples(2, &[(0, 1, 0)]).unwrap_err(),
            GraphError::NonPositiveWeight { .. }
        ));
    }

    #[test]
    fn rejects_duplicate_edge_even_when_flipped() {
        assert_eq!(
            WeightedGraph::from_triples(2, &[(0, 1, 1), (1, 0, 2)]).unwrap_err(),
            GraphError::DuplicateEdge {
                u: NodeId(0),
                v: NodeId(1)
            }
        );
    }

    #[test]
    fn rejects_out_of_range_endpoint() {
        assert_eq!(
            WeightedGraph::from_triples(2, &[(0, 2, 1)]).unwrap_err(),
            GraphError::EndpointOutOfRange {
                node: NodeId(2),
                vertex_count: 2
            }
        );
    }

    #[test]
    fn edges_are_canonicalized() {
        let g = WeightedGraph::from_triples(3, &[(2, 0, 5)]).unwrap();
        assert_eq!(g.edges()[0].endpoints(), (NodeId(0), NodeId(2)));
        assert!(g.are_adjacent(NodeId(2), NodeId(0)));
        assert!(!g.are_adjacent(NodeId(1), NodeId(2)));
    }

    #[test]
    fn heavier_prefers_larger_weight() {
        let a = Edge::new(NodeId(0), NodeId(1), w(5)).unwrap();
        let b = Edge::new(NodeId(1), NodeId(2), w(3)).unwrap();
        assert!(heavier(&a, &b));
        assert!(!heavier(&b, &a));
    }

    #[test]
    fn heavier_breaks_weight_ties_by_smaller_lo() {
        let a = Edge::new(NodeId(0), NodeId(1), w(5)).unwrap();
        let b = Edge::new(NodeId(2), NodeId(3), w(5)).unwrap();
        assert!(heavier(&a, &b));
        assert!(!heavier(&b, &a));
    }

    #[test]
    fn heavier_breaks_full_ties_by_smaller_hi() {
        let a = Edge::new(NodeId(0), NodeId(1), w(5)).unwrap();
        let b = Edge::new(NodeId(0), NodeId(2), w(5)).unwrap();
        assert!(heavier(&a, &b));
    }

    #[test]
    fn order_key_agrees_with_order_cmp() {
        let edges = [
            Edge::new(NodeId(0), NodeId(1), w(5)).unwrap(),
            Edge::new(NodeId(0), NodeId(2), w(5)).unwrap(),
            Edge::new(NodeId(1), NodeId(2), w(9)).unwrap(),
            Edge::new(NodeId(2), NodeId(3), w(1)).unwrap(),
        ];
        for a in &edges {
            for b in &edges {
                assert_eq!(a.order_cmp(b), a.order_key().cmp(&b.order_key()));
            }
        }
    }

    #[test]
    fn neighbors_are_sorted() {
        let g = WeightedGraph::from_triples(4, &[(2, 1, 1), (1, 0, 2), (1, 3, 3)]).unwrap();
        let ns: Vec<_> = g.neighbors(NodeId(1)).collect();
        assert_eq!(ns, vec![NodeId(0), NodeId(2), NodeId(3)]);
    }
}
