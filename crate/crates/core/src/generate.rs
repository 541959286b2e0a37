//! Seedable graph generators for fixtures and batch experiments.
//!
//! Output is fully determined by `(kind, n, seed, policy)`. The structure
//! is drawn first, then weights are assigned to edges in construction
//! order, so explicit weight lists line up with the documented edge order
//! of each family (paths left to right, stars by leaf id, complete graphs
//! lexicographic, and so on).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, GraphError, NodeId, WeightedGraph};
use crate::weight::EdgeWeight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    Path,
    Cycle,
    Star,
    Complete,
    /// Each vertex pair is an edge independently with probability `p`.
    Gnp { p: f64 },
    /// Uniform random attachment: vertex `i` connects to a uniform earlier vertex.
    RandomTree,
    /// Complete-bipartite-style random graph: `left` vertices on one side,
    /// the rest on the other, each cross pair an edge with probability `p`.
    Bipartite { left: usize, p: f64 },
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Path => write!(f, "path"),
            GraphKind::Cycle => write!(f, "cycle"),
            GraphKind::Star => write!(f, "star"),
            GraphKind::Complete => write!(f, "complete"),
            GraphKind::Gnp { p } => write!(f, "gnp({p})"),
            GraphKind::RandomTree => write!(f, "tree"),
            GraphKind::Bipartite { left, p } => write!(f, "bipartite({left},{p})"),
        }
    }
}

/// How edge weights are assigned, in edge construction order.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightPolicy {
    /// Pairwise-distinct random integers.
    DistinctRandom,
    /// Independent uniform integers in `1..=100`; duplicates likely.
    UniformRandom,
    /// Every edge weighs 1.
    AllEqual,
    /// Near-tight family for the half-approximation bound: on a path, the
    /// repeating weight pattern `base, base+1, base`. The four-vertex path
    /// is the canonical instance (greedy takes the middle edge for
    /// `base+1`, the optimum takes both outer edges for `2*base`).
    AdversarialHalfRatio { base: u64 },
    /// Explicit weights, one per edge in construction order.
    Explicit(Vec<EdgeWeight>),
}

impl WeightPolicy {
    pub fn explicit_integers(weights: &[i64]) -> Result<Self, GraphError> {
        Ok(WeightPolicy::Explicit(
            weights
                .iter()
                .map(|&w| EdgeWeight::from_integer(w))
                .collect::<Result<_, _>>()?,
        ))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("cycle needs at least 3 vertices, got {n}")]
    CycleTooSmall { n: usize },
    #[error("edge probability {p} outside [0, 1]")]
    InvalidProbability { p: f64 },
    #[error("bipartite left side {left} exceeds vertex count {n}")]
    BipartiteLeftTooLarge { left: usize, n: usize },
    #[error("adversarial weight pattern requires a path, got {kind}")]
    AdversarialNeedsPath { kind: String },
    #[error("explicit weight list has {given} entries but the graph has {needed} edges")]
    ExplicitWeightCount { given: usize, needed: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Deterministically generates a graph for `(kind, n, seed, policy)`.
pub fn generate(
    kind: GraphKind,
    n: usize,
    seed: u64,
    policy: &WeightPolicy,
) -> Result<WeightedGraph, GenerateError> {
    if matches!(policy, WeightPolicy::AdversarialHalfRatio { .. }) && kind != GraphKind::Path {
        return Err(GenerateError::AdversarialNeedsPath {
            kind: kind.to_string(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = structure(kind, n, &mut rng)?;
    let weights = assign_weights(policy, pairs.len(), &mut rng)?;
    let edges = pairs
        .into_iter()
        .zip(weights)
        .map(|((a, b), w)| Edge::new(NodeId(a), NodeId(b), w).map_err(GenerateError::from))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightedGraph::new(n, edges)?)
}

/// Vertex pairs of the requested family, in construction order.
fn structure(
    kind: GraphKind,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(u32, u32)>, GenerateError> {
    let mut pairs = Vec::new();
    match kind {
        GraphKind::Path => {
            for i in 1..n {
                pairs.push((i as u32 - 1, i as u32));
            }
        }
        GraphKind::Cycle => {
            if n > 0 && n < 3 {
                return Err(GenerateError::CycleTooSmall { n });
            }
            for i in 1..n {
                pairs.push((i as u32 - 1, i as u32));
            }
            if n >= 3 {
                pairs.push((n as u32 - 1, 0));
            }
        }
        GraphKind::Star => {
            for leaf in 1..n {
                pairs.push((0, leaf as u32));
            }
        }
        GraphKind::Complete => {
            for i in 0..n {
                for j in (i + 1)..n {
                    pairs.push((i as u32, j as u32));
                }
            }
        }
        GraphKind::Gnp { p } => {
            check_probability(p)?;
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(p) {
                        pairs.push((i as u32, j as u32));
                    }
                }
            }
        }
        GraphKind::RandomTree => {
            for i in 1..n {
                let parent = rng.gen_range(0..i) as u32;
                pairs.push((parent, i as u32));
            }
        }
        GraphKind::Bipartite { left, p } => {
            check_probability(p)?;
            if left > n {
                return Err(GenerateError::BipartiteLeftTooLarge { left, n });
            }
            for i in 0..left {
                for j in left..n {
                    if rng.gen_bool(p) {
                        pairs.push((i as u32, j as u32));
                    }
                }
            }
        }
    }
    Ok(pairs)
}

fn check_probability(p: f64) -> Result<(), GenerateError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenerateError::InvalidProbability { p })
    }
}

fn assign_weights(
    policy: &WeightPolicy,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<EdgeWeight>, GenerateError> {
    let integers = |values: Vec<u64>| -> Result<Vec<EdgeWeight>, GenerateError> {
        values
            .into_iter()
            .map(|v| EdgeWeight::from_integer(v as i64).map_err(GenerateError::from))
            .collect()
    };
    match policy {
        WeightPolicy::DistinctRandom => {
            // distinct values from 1..=10*count, in random draw order
            let pool = (10 * count).max(1);
            let sample = rand::seq::index::sample(rng, pool, count);
            integers(sample.iter().map(|i| i as u64 + 1).collect())
        }
        WeightPolicy::UniformRandom => {
            integers((0..count).map(|_| rng.gen_range(1..=100)).collect())
        }
        WeightPolicy::AllEqual => integers(vec![1; count]),
        WeightPolicy::AdversarialHalfRatio { base } => integers(
            (0..count)
                .map(|i| if i % 3 == 1 { base + 1 } else { *base })
                .collect(),
        ),
        WeightPolicy::Explicit(weights) => {
            if weights.len() != count {
                return Err(GenerateError::ExplicitWeightCount {
                    given: weights.len(),
                    needed: count,
                });
            }
            Ok(weights.clone())
        }
    }
}

impl FromStr for GraphKind {
    type Err = String;

    /// Parses a kind name; `gnp` and `bipartite` get their parameters from
    /// separate options, so bare names map to placeholder parameters that
    /// callers overwrite.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "path" => Ok(GraphKind::Path),
            "cycle" => Ok(GraphKind::Cycle),
            "star" => Ok(GraphKind::Star),
            "complete" => Ok(GraphKind::Complete),
            "gnp" => Ok(GraphKind::Gnp { p: 0.5 }),
            "tree" => Ok(GraphKind::RandomTree),
            "bipartite" => Ok(GraphKind::Bipartite { left: 0, p: 0.5 }),
            other => Err(format!(
                "unknown graph kind {other:?} (expected path, cycle, star, complete, gnp, tree, or bipartite)"
            )),
        }
    }
}
