//! Property tests for the graph model and the reference matchers.
//!
//! The independent re-implementations in this file (a greedy variant
//! that resolves rounds in the opposite order, and a take-or-skip
//! enumeration of all matchings) exist to cross-check the library
//! against code that shares none of its internals.

use greedymatch::{
    generate, heavier, is_valid_matching, optimal_matching, parse_graph,
    sequential_greedy, serialize_graph, simulate, Edge, GraphKind, SchedulerPolicy,
    SimConfig, WeightPolicy, WeightedGraph,
};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = GraphKind> {
    prop_oneof![
        Just(GraphKind::Path),
        Just(GraphKind::Cycle),
        Just(GraphKind::Star),
        Just(GraphKind::Complete),
        (1u32..=9).prop_map(|t| GraphKind::Gnp { p: f64::from(t) / 10.0 }),
        Just(GraphKind::RandomTree),
        (0usize..=5, 1u32..=9).prop_map(|(left, t)| GraphKind::Bipartite {
            left,
            p: f64::from(t) / 10.0,
        }),
    ]
}

fn policy_strategy() -> impl Strategy<Value = WeightPolicy> {
    prop_oneof![
        Just(WeightPolicy::DistinctRandom),
        Just(WeightPolicy::UniformRandom),
        Just(WeightPolicy::AllEqual),
    ]
}

/// Clamps family parameters to the vertex count so every draw is valid.
fn make_graph(kind: GraphKind, n: usize, seed: u64, policy: &WeightPolicy) -> WeightedGraph {
    let (kind, n) = match kind {
        GraphKind::Cycle if n > 0 && n < 3 => (GraphKind::Cycle, 3),
        GraphKind::Bipartite { left, p } => (
            GraphKind::Bipartite {
                left: left.min(n),
                p,
            },
            n,
        ),
        other => (other, n),
    };
    generate(kind, n, seed, policy).expect("clamped parameters generate cleanly")
}

/// All matchings by take-or-skip recursion over the edge list; returns
/// the best total weight. Exponential and proudly naive.
fn best_weight_by_enumeration(g: &WeightedGraph) -> BigRational {
    fn go(edges: &[Edge], used: &mut Vec<bool>, from: usize) -> BigRational {
        let mut best = BigRational::zero();
        for i in from..edges.len() {
            let (u, v) = edges[i].endpoints();
            if used[u.index()] || used[v.index()] {
                continue;
            }
            used[u.index()] = true;
            used[v.index()] = true;
            let with = edges[i].weight().value().clone() + go(edges, used, i + 1);
            used[u.index()] = false;
            used[v.index()] = false;
            if with > best {
                best = with;
            }
        }
        best
    }
    let mut used = vec![false; g.vertex_count()];
    go(g.edges(), &mut used, 0)
}

/// Greedy variant resolving each round in the opposite global order:
/// among the currently locally heaviest edges it takes the one that
/// comes last, not first. Local dominance makes the result independent
/// of that choice, which is exactly what the tests assert.
fn greedy_taking_last(g: &WeightedGraph) -> Vec<Edge> {
    let mut remaining: Vec<Edge> = g.edges().to_vec();
    let mut picked: Vec<Edge> = Vec::new();
    loop {
        let mut dominant: Vec<Edge> = remaining
            .iter()
            .filter(|e| {
                remaining
                    .iter()
                    .filter(|f| f.endpoints() != e.endpoints())
                    .all(|f| !f.shares_endpoint(e) || heavier(e, f))
            })
            .cloned()
            .collect();
        dominant.sort_by(|a, b| a.order_cmp(b));
        let Some(chosen) = dominant.pop() else {
            break;
        };
        remaining.retain(|f| !f.shares_endpoint(&chosen));
        picked.push(chosen);
    }
    picked.sort_by_key(|e| e.endpoints());
    picked
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heavier_is_a_strict_total_order(
        kind in kind_strategy(),
        n in 0usize..=10,
        seed in any::<u64>(),
        policy in policy_strategy(),
    ) {
        let g = make_graph(kind, n, seed, &policy);
        for (i, a) in g.edges().iter().enumerate() {
            for b in &g.edges()[i + 1..] {
                prop_assert_ne!(heavier(a, b), heavier(b, a));
            }
            prop_assert!(!heavier(a, a));
        }
    }

    #[test]
    fn text_format_round_trips(
        kind in kind_strategy(),
        n in 0usize..=10,
        seed in any::<u64>(),
        policy in policy_strategy(),
    ) {
        let g = make_graph(kind, n, seed, &policy);
        let text = serialize_graph(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn distinct_random_weights_never_collide(
        kind in kind_strategy(),
        n in 0usize..=10,
        seed in any::<u64>(),
    ) {
        let g = make_graph(kind, n, seed, &WeightPolicy::DistinctRandom);
        let mut weights: Vec<_> =
            g.edges().iter().map(|e| e.weight().clone()).collect();
        weights.sort();
        weights.dedup();
        prop_assert_eq!(weights.len(), g.edge_count());
    }

    #[test]
    fn greedy_reaches_at_least_half_the_optimum(
        kind in kind_strategy(),
        n in 0usize..=10,
        seed in any::<u64>(),
        policy in policy_strategy(),
    ) {
        let g = make_graph(kind, n, seed, &policy);
        let greedy = sequential_greedy(&g);
        let optimal = optimal_matching(&g).unwrap();
        prop_assert!(is_valid_matching(&g, greedy.edges()));
        prop_assert!(is_valid_matching(&g, optimal.edges()));
        let two = BigRational::from_integer(2.into());
        prop_assert!(
            two * greedy.total_weight() >= optimal.total_weight(),
            "greedy {} vs optimal {}",
            greedy.total_weight(),
            optimal.total_weight()
        );
        prop_assert!(greedy.total_weight() <= optimal.total_weight());
    }

    #[test]
    fn subset_dp_agrees_with_enumeration(
        kind in kind_strategy(),
        n in 0usize..=10,
        seed in any::<u64>(),
        policy in policy_strategy(),
    ) {
        let g = make_graph(kind, n, seed, &policy);
        let dp = optimal_matching(&g).unwrap();
        prop_assert_eq!(dp.total_weight(), best_weight_by_enumeration(&g));
    }

    #[test]
    fn round_order_does_not_change_the_greedy_matching(
        kind in kind_strategy(),
        n in 0usize..=10,
        seed in any::<u64>(),
        policy in policy_strategy(),
    ) {
        let g = make_graph(kind, n, seed, &policy);
        let first = sequential_greedy(&g);
        let last = greedy_taking_last(&g);
        prop_assert_eq!(first.edges(), last.as_slice());
    }

    #[test]
    fn distributed_run_equals_the_sequential_reference(
        kind in kind_strategy(),
        n in 0usize..=10,
        seed in any::<u64>(),
        policy in policy_strategy(),
        sim_seed in any::<u64>(),
        sched in prop::sample::select(SchedulerPolicy::ALL.to_vec()),
    ) {
        let g = make_graph(kind, n, seed, &policy);
        let run = simulate(&g, &SimConfig::new(sched, sim_seed)).unwrap();
        let reference = sequential_greedy(&g);
        prop_assert_eq!(run.matching.edges(), reference.edges());
    }
}

#[test]
fn enumeration_oracle_spot_checks() {
    // hand-checked values so the oracle itself is anchored
    let path = WeightedGraph::from_triples(4, &[(0, 1, 2), (1, 2, 3), (2, 3, 2)]).unwrap();
    assert_eq!(
        best_weight_by_enumeration(&path),
        BigRational::from_integer(4.into())
    );
    let triangle = WeightedGraph::from_triples(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 3)]).unwrap();
    assert_eq!(
        best_weight_by_enumeration(&triangle),
        BigRational::from_integer(3.into())
    );
    let empty = WeightedGraph::from_triples(2, &[]).unwrap();
    assert!(best_weight_by_enumeration(&empty).is_zero());
}
