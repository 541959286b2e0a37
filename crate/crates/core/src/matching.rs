//! Matchings and the reference matchers.
//!
//! Two references live here next to the [`Matching`] type itself:
//!
//! * [`sequential_greedy`]: repeatedly takes a locally heaviest remaining
//!   edge and discards everything incident to it. Guaranteed to reach at
//!   least half the optimal weight.
//! * [`optimal_matching`]: exact maximum-weight matching by dynamic
//!   programming over vertex subsets. Exponential, for small instances
//!   only; this is the oracle the greedy results are measured against.
//!
//! [`candidate`] is the selector both the sequential and the distributed
//! algorithm use to answer "which neighbor is across my locally heaviest
//! remaining edge".

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{heavier, Edge, NodeId, WeightedGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("{node} is not a neighbor of {of}")]
    NotANeighbor { node: NodeId, of: NodeId },
    #[error("edge ({u},{v}) is not in the graph")]
    EdgeNotInGraph { u: NodeId, v: NodeId },
    #[error("vertex {node} is matched twice")]
    VertexMatchedTwice { node: NodeId },
    #[error("graph has {vertices} vertices, exact search is limited to {limit}")]
    GraphTooLarge { vertices: usize, limit: usize },
}

/// A set of vertex-disjoint edges of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Sorted by `(u, v)`.
    edges: Vec<Edge>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { edges: Vec::new() }
    }

    /// Validates that `edges` are edges of `g` and vertex-disjoint.
    pub fn from_edges(
        g: &WeightedGraph,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, MatchingError> {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        let mut used = BTreeSet::new();
        for e in &edges {
            match g.edge_between(e.u(), e.v()) {
                Some(present) if present == e => {}
                _ => {
                    return Err(MatchingError::EdgeNotInGraph { u: e.u(), v: e.v() });
                }
            }
            for node in [e.u(), e.v()] {
                if !used.insert(node) {
                    return Err(MatchingError::VertexMatchedTwice { node });
                }
            }
        }
        edges.sort_by_key(|e| e.endpoints());
        Ok(Matching { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Exact sum of the edge weights; zero for the empty matching.
    pub fn total_weight(&self) -> BigRational {
        matching_weight(&self.edges)
    }

    pub fn contains_vertex(&self, node: NodeId) -> bool {
        self.edges.iter().any(|e| e.touches(node))
    }

    /// Endpoint pairs, sorted.
    pub fn pairs(&self) -> Vec<(NodeId, NodeId)> {
        self.edges.iter().map(|e| e.endpoints()).collect()
    }
}

/// Exact sum of the weights of a set of edges.
pub fn matching_weight(edges: &[Edge]) -> BigRational {
    edges
        .iter()
        .fold(BigRational::zero(), |acc, e| acc + e.weight().value())
}

/// True iff every edge is an edge of `g` and no vertex appears twice.
pub fn is_valid_matching(g: &WeightedGraph, edges: &[Edge]) -> bool {
    Matching::from_edges(g, edges.iter().cloned()).is_ok()
}

/// The neighbor of `u` across the heaviest edge into `live`, or `None`
/// when `live` is empty. `live` must be a subset of `u`'s neighbors.
///
/// The result is unique because the edge order is total even among equal
/// weights.
pub fn candidate(
    g: &WeightedGraph,
    u: NodeId,
    live: &BTreeSet<NodeId>,
) -> Result<Option<NodeId>, MatchingError> {
    for &x in live {
        if !g.are_adjacent(u, x) {
            return Err(MatchingError::NotANeighbor { node: x, of: u });
        }
    }
    Ok(best_live_neighbor(g, u, live))
}

/// Unchecked core of [`candidate`]: callers guarantee `live ⊆ neighbors(u)`.
pub(crate) fn best_live_neighbor(
    g: &WeightedGraph,
    u: NodeId,
    live: &BTreeSet<NodeId>,
) -> Option<NodeId> {
    let mut best: Option<&Edge> = None;
    for &x in live {
        let e = g
            .edge_between(u, x)
            .expect("live set must contain only neighbors");
        best = match best {
            Some(b) if !heavier(e, b) => Some(b),
            _ => Some(e),
        };
    }
    best.map(|e| e.other_endpoint(u).expect("edge is incident to u"))
}

/// Greedy matching by locally heaviest edges.
///
/// Scanning the edges once in canonical order and taking every edge whose
/// endpoints are both still free selects, round for round, the first
/// locally heaviest edge of the remaining graph: the first remaining edge
/// in the total order is heavier than every other remaining edge, in
/// particular its neighbors, and no locally heaviest edge precedes it.
pub fn sequential_greedy(g: &WeightedGraph) -> Matching {
    let mut order: Vec<&Edge> = g.edges().iter().collect();
    order.sort_by(|a, b| a.order_cmp(b));
    let mut used = vec![false; g.vertex_count()];
    let mut picked = Vec::new();
    for e in order {
        if !used[e.u().index()] && !used[e.v().index()] {
            used[e.u().index()] = true;
            used[e.v().index()] = true;
            picked.push(e.clone());
        }
    }
    picked.sort_by_key(|e| e.endpoints());
    let m = Matching { edges: picked };
    debug_assert!(is_valid_matching(g, m.edges()));
    m
}

/// Default vertex-count cap for [`optimal_matching`].
pub const DEFAULT_ORACLE_LIMIT: usize = 20;

/// Exact maximum-weight matching, capped at [`DEFAULT_ORACLE_LIMIT`] vertices.
pub fn optimal_matching(g: &WeightedGraph) -> Result<Matching, MatchingError> {
    optimal_matching_with_limit(g, DEFAULT_ORACLE_LIMIT)
}

/// Exact maximum-weight matching via subset dynamic programming.
///
/// `best[s]` is the maximum matching weight using only the free vertices
/// in bitmask `s`; the lowest free vertex is either left unmatched or
/// matched to one of its neighbors in `s`. Time and memory are `O(2^n)`.
pub fn optimal_matching_with_limit(
    g: &WeightedGraph,
    limit: usize,
) -> Result<Matching, MatchingError> {
    let n = g.vertex_count();
    if n > limit {
        return Err(MatchingError::GraphTooLarge {
            vertices: n,
            limit,
        });
    }
    if n == 0 {
        return Ok(Matching::empty());
    }

    let zero = BigRational::zero();
    let mut best = vec![BigRational::zero(); 1 << n];
    // matched partner of the lowest vertex, or None when it stays free
    let mut choice: Vec<Option<NodeId>> = vec![None; 1 << n];

    for s in 1usize..(1 << n) {
        let v = s.trailing_zeros() as usize;
        let rest = s & !(1 << v);
        let mut s_best = best[rest].clone();
        let mut s_choice = None;
        for u in g.neighbors(NodeId(v as u32)) {
            if rest & (1 << u.index()) == 0 {
                continue;
            }
            let e = g
                .edge_between(NodeId(v as u32), u)
                .expect("adjacency and edge lookup agree");
            let with = e.weight().value() + &best[rest & !(1 << u.index())];
            if with > s_best {
                s_best = with;
                s_choice = Some(u);
            }
        }
        best[s] = s_best;
        choice[s] = s_choice;
    }

    let mut edges = Vec::new();
    let mut s = (1usize << n) - 1;
    while s != 0 {
        let v = s.trailing_zeros() as usize;
        match choice[s] {
            None => s &= !(1 << v),
            Some(u) => {
                let e = g
                    .edge_between(NodeId(v as u32), u)
                    .expect("choice came from adjacency");
                edges.push(e.clone());
                s &= !(1 << v);
                s &= !(1 << u.index());
            }
        }
    }
    debug_assert_eq!(matching_weight(&edges), best[(1 << n) - 1]);
    debug_assert!(best[(1 << n) - 1] >= zero);
    Matching::from_edges(g, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphError;
    use crate::weight::EdgeWeight;
    use num_bigint::BigInt;

    fn rational(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn path_232() -> WeightedGraph {
        WeightedGraph::from_triples(4, &[(0, 1, 2), (1, 2, 3), (2, 3, 2)]).unwrap()
    }

    // Brute-force oracle: enumerate every matching by scanning edges in
    // index order and branching on take/skip. Independent of both
    // sequential_greedy and the subset DP.
    fn enumerate_max_weight(g: &WeightedGraph) -> BigRational {
        fn go(g: &WeightedGraph, idx: usize, used: &mut Vec<bool>) -> BigRational {
            if idx == g.edge_count() {
                return BigRational::zero();
            }
            let skip = go(g, idx + 1, used);
            let e = &g.edges()[idx];
            if used[e.u().index()] || used[e.v().index()] {
                return skip;
            }
            used[e.u().index()] = true;
            used[e.v().index()] = true;
            let take = e.weight().value() + go(g, idx + 1, used);
            used[e.u().index()] = false;
            used[e.v().index()] = false;
            skip.max(take)
        }
        go(g, 0, &mut vec![false; g.vertex_count()])
    }

    #[test]
    fn candidate_picks_heaviest_neighbor() {
        let g = WeightedGraph::from_triples(3, &[(0, 1, 5), (0, 2, 3)]).unwrap();
        let live: BTreeSet<NodeId> = [NodeId(1), NodeId(2)].into();
        assert_eq!(candidate(&g, NodeId(0), &live).unwrap(), Some(NodeId(1)));
    }

    #[test]
    fn candidate_of_empty_live_set_is_none() {
        let g = WeightedGraph::from_triples(3, &[(0, 1, 5)]).unwrap();
        assert_eq!(candidate(&g, NodeId(0), &BTreeSet::new()).unwrap(), None);
    }

    #[test]
    fn candidate_breaks_weight_ties_by_edge_order() {
        // edges (0,1) and (0,2) both weigh 5; (0,1) precedes
        let g = WeightedGraph::from_triples(3, &[(0, 1, 5), (0, 2, 5)]).unwrap();
        let live: BTreeSet<NodeId> = [NodeId(1), NodeId(2)].into();
        assert_eq!(candidate(&g, NodeId(0), &live).unwrap(), Some(NodeId(1)));
    }

    #[test]
    fn candidate_rejects_non_neighbor() {
        let g = WeightedGraph::from_triples(3, &[(0, 1, 5)]).unwrap();
        let live: BTreeSet<NodeId> = [NodeId(2)].into();
        assert_eq!(
            candidate(&g, NodeId(0), &live),
            Err(MatchingError::NotANeighbor {
                node: NodeId(2),
                of: NodeId(0)
            })
        );
    }

    #[test]
    fn greedy_takes_single_edge() {
        let g = WeightedGraph::from_triples(2, &[(0, 1, 7)]).unwrap();
        let m = sequential_greedy(&g);
        assert_eq!(m.pairs(), vec![(NodeId(0), NodeId(1))]);
        assert_eq!(m.total_weight(), rational(7));
    }

    #[test]
    fn greedy_on_path_232_takes_middle_edge() {
        let m = sequential_greedy(&path_232());
        assert_eq!(m.pairs(), vec![(NodeId(1), NodeId(2))]);
        assert_eq!(m.total_weight(), rational(3));
    }

    #[test]
    fn optimal_on_path_232_takes_outer_edges() {
        let g = path_232();
        // oracle cross-check before freezing: enumeration also says 4
        assert_eq!(enumerate_max_weight(&g), rational(4));
        let m = optimal_matching(&g).unwrap();
        assert_eq!(m.total_weight(), rational(4));
        assert_eq!(m.pairs(), vec![(NodeId(0), NodeId(1)), (NodeId(2), NodeId(3))]);
    }

    #[test]
    fn triangle_greedy_equals_optimal() {
        let g = WeightedGraph::from_triples(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 3)]).unwrap();
        assert_eq!(enumerate_max_weight(&g), rational(3));
        let greedy = sequential_greedy(&g);
        assert_eq!(greedy.total_weight(), rational(3));
        assert_eq!(greedy.pairs(), vec![(NodeId(0), NodeId(2))]);
        assert_eq!(optimal_matching(&g).unwrap().total_weight(), rational(3));
    }

    #[test]
    fn optimal_of_empty_edge_set_is_zero() {
        let g = WeightedGraph::from_triples(4, &[]).unwrap();
        let m = optimal_matching(&g).unwrap();
        assert!(m.is_empty());
        assert_eq!(m.total_weight(), BigRational::zero());
    }

    #[test]
    fn optimal_single_edge() {
        let g = WeightedGraph::from_triples(2, &[(0, 1, 7)]).unwrap();
        assert_eq!(optimal_matching(&g).unwrap().total_weight(), rational(7));
    }

    #[test]
    fn optimal_rejects_oversized_graph() {
        let g = WeightedGraph::from_triples(21, &[(0, 1, 1)]).unwrap();
        assert_eq!(
            optimal_matching(&g),
            Err(MatchingError::GraphTooLarge {
                vertices: 21,
                limit: 20
            })
        );
        assert!(optimal_matching_with_limit(&g, 21).is_ok());
    }

    #[test]
    fn optimal_handles_rational_weights() {
        let half = EdgeWeight::from_ratio(1, 2).unwrap();
        let third = EdgeWeight::from_ratio(1, 3).unwrap();
        let e1 = Edge::new(NodeId(0), NodeId(1), half).unwrap();
        let e2 = Edge::new(NodeId(1), NodeId(2), third).unwrap();
        let g = WeightedGraph::new(3, vec![e1, e2]).unwrap();
        assert_eq!(
            optimal_matching(&g).unwrap().total_weight(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn validity_checks() {
        let g = path_232();
        assert!(is_valid_matching(&g, &[]));
        let e01 = g.edge_between(NodeId(0), NodeId(1)).unwrap().clone();
        let e12 = g.edge_between(NodeId(1), NodeId(2)).unwrap().clone();
        let e23 = g.edge_between(NodeId(2), NodeId(3)).unwrap().clone();
        assert!(!is_valid_matching(&g, &[e01.clone(), e12]));
        assert!(is_valid_matching(&g, &[e01.clone(), e23]));
        // an edge that is not in the graph
        let foreign = Edge::new(NodeId(0), NodeId(2), EdgeWeight::from_integer(1).unwrap())
            .unwrap();
        assert!(!is_valid_matching(&g, &[foreign]));
        // same endpoints, different weight: still not an edge of g
        let reweighted = Edge::new(NodeId(0), NodeId(1), EdgeWeight::from_integer(9).unwrap())
            .unwrap();
        assert!(!is_valid_matching(&g, &[reweighted]));
        let _ = e01;
    }

    #[test]
    fn matching_weight_sums_exactly() {
        assert_eq!(matching_weight(&[]), BigRational::zero());
        let a = Edge::new(NodeId(0), NodeId(1), EdgeWeight::from_integer(2).unwrap()).unwrap();
        let b = Edge::new(NodeId(2), NodeId(3), EdgeWeight::from_integer(3).unwrap()).unwrap();
        assert_eq!(matching_weight(&[a, b]), rational(5));
    }

    #[test]
    fn dp_matches_enumeration_on_mixed_graphs() {
        use crate::generate::{generate, GraphKind, WeightPolicy};
        for seed in 0..30u64 {
            let kind = match seed % 5 {
                0 => GraphKind::Complete,
                1 => GraphKind::Gnp { p: 0.5 },
                2 => GraphKind::Cycle,
                3 => GraphKind::RandomTree,
                _ => GraphKind::Star,
            };
            let n = 3 + (seed as usize % 6);
            let policy = if seed % 2 == 0 {
                WeightPolicy::DistinctRandom
            } else {
                WeightPolicy::UniformRandom
            };
            let g = generate(kind, n, seed, &policy).unwrap();
            let m = optimal_matching(&g).unwrap();
            assert_eq!(m.total_weight(), enumerate_max_weight(&g), "seed {seed}");
            assert!(is_valid_matching(&g, m.edges()));
        }
    }

    #[test]
    fn weight_error_is_graph_error() {
        // EdgeWeight construction reports through GraphError
        assert!(matches!(
            EdgeWeight::from_integer(0),
            Err(GraphError::NonPositiveWeight { .. })
        ));
    }
}
