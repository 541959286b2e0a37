//! Deterministic graph fixtures shared by the benchmark suite.

use greedymatch::{generate, GraphKind, WeightPolicy, WeightedGraph};

/// One fixed graph per (kind, n) pair; seed and weights never vary so
/// measurements stay comparable across runs.
pub fn fixture(kind: GraphKind, n: usize) -> WeightedGraph {
    generate(n_kind(kind, n), n, 42, &WeightPolicy::DistinctRandom).expect("fixture generates")
}

pub fn sparse(n: usize) -> WeightedGraph {
    fixture(GraphKind::Gnp { p: 0.15 }, n)
}

pub fn dense(n: usize) -> WeightedGraph {
    fixture(GraphKind::Gnp { p: 0.7 }, n)
}

fn n_kind(kind: GraphKind, n: usize) -> GraphKind {
    match kind {
        GraphKind::Bipartite { p, .. } => GraphKind::Bipartite { left: n / 2, p },
        other => other,
    }
}
