//! System tests for the simulator: whole-corpus guarantees that every
//! run must satisfy regardless of graph family or delivery order.

use std::collections::BTreeSet;

use greedymatch::{
    check_trace, generate, is_valid_matching, sequential_greedy, simulate, GraphKind,
    NodeId, SchedulerPolicy, SimConfig, TraceEvent, WeightPolicy, WeightedGraph,
};

fn corpus() -> Vec<(String, WeightedGraph)> {
    let mut graphs: Vec<(String, WeightedGraph)> = vec![
        (
            "empty".into(),
            WeightedGraph::from_triples(0, &[]).unwrap(),
        ),
        (
            "edgeless".into(),
            WeightedGraph::from_triples(4, &[]).unwrap(),
        ),
        (
            "single-edge".into(),
            WeightedGraph::from_triples(2, &[(0, 1, 7)]).unwrap(),
        ),
        (
            "edge-plus-isolated".into(),
            WeightedGraph::from_triples(4, &[(1, 3, 5)]).unwrap(),
        ),
        (
            "claw".into(),
            WeightedGraph::from_triples(4, &[(0, 1, 1), (0, 2, 2), (0, 3, 3)]).unwrap(),
        ),
        (
            "light-heavy-light path".into(),
            WeightedGraph::from_triples(4, &[(0, 1, 2), (1, 2, 3), (2, 3, 2)]).unwrap(),
        ),
        (
            "two independent pairs".into(),
            WeightedGraph::from_triples(4, &[(0, 1, 5), (1, 2, 1), (2, 3, 5)]).unwrap(),
        ),
        (
            "all-equal complete".into(),
            WeightedGraph::from_triples(
                4,
                &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
            )
            .unwrap(),
        ),
    ];
    let families = [
        (GraphKind::Path, WeightPolicy::DistinctRandom),
        (GraphKind::Cycle, WeightPolicy::UniformRandom),
        (GraphKind::Star, WeightPolicy::AllEqual),
        (GraphKind::Complete, WeightPolicy::DistinctRandom),
        (GraphKind::Gnp { p: 0.4 }, WeightPolicy::UniformRandom),
        (GraphKind::RandomTree, WeightPolicy::DistinctRandom),
        (GraphKind::Bipartite { left: 4, p: 0.6 }, WeightPolicy::AllEqual),
    ];
    for (kind, policy) in families {
        for n in [3usize, 6, 9] {
            let kind = match kind {
                GraphKind::Bipartite { p, .. } => GraphKind::Bipartite { left: n / 2, p },
                k => k,
            };
            for seed in [0u64, 1] {
                let g = generate(kind, n, seed, &policy).unwrap();
                graphs.push((format!("{kind} n={n} seed={seed}"), g));
            }
        }
    }
    graphs
}

#[test]
fn every_run_respects_the_send_budget_and_all_checks() {
    for (label, g) in corpus() {
        let reference = sequential_greedy(&g);
        for policy in SchedulerPolicy::ALL {
            for seed in [0u64, 7] {
                let run = simulate(&g, &SimConfig::new(policy, seed)).unwrap();
                let ctx = format!("{label}, {policy}, seed {seed}");
                assert!(
                    run.stats.messages_total <= 2 * g.edge_count() as u64,
                    "send budget exceeded on {ctx}"
                );
                assert!(is_valid_matching(&g, run.matching.edges()), "{ctx}");
                assert_eq!(
                    run.matching.edges(),
                    reference.edges(),
                    "result diverged from the sequential reference on {ctx}"
                );
                for verdict in check_trace(&g, &run.trace).unwrap() {
                    assert!(!verdict.outcome.is_fail(), "{verdict} on {ctx}");
                }
            }
        }
    }
}

#[test]
fn nothing_is_processed_after_termination() {
    for (label, g) in corpus() {
        for policy in SchedulerPolicy::ALL {
            let run = simulate(&g, &SimConfig::new(policy, 3)).unwrap();
            let mut terminated: BTreeSet<NodeId> = BTreeSet::new();
            for ev in &run.trace.events {
                match ev {
                    TraceEvent::Terminate { node, .. } => {
                        terminated.insert(*node);
                    }
                    TraceEvent::Deliver { to, absorbed, .. } => {
                        if *absorbed {
                            assert!(
                                terminated.contains(to),
                                "absorbed delivery to a running node on {label}"
                            );
                        } else {
                            assert!(
                                !terminated.contains(to),
                                "processed delivery to a terminated node on {label}"
                            );
                        }
                    }
                    _ => {}
                }
            }
        }
    }
}

#[test]
fn every_send_is_delivered_exactly_once() {
    for (label, g) in corpus() {
        for policy in SchedulerPolicy::ALL {
            let run = simulate(&g, &SimConfig::new(policy, 11)).unwrap();
            let mut sent: Vec<(NodeId, NodeId)> = Vec::new();
            let mut delivered: Vec<(NodeId, NodeId)> = Vec::new();
            for ev in &run.trace.events {
                match ev {
                    TraceEvent::Send { from, to, .. } => sent.push((*from, *to)),
                    TraceEvent::Deliver { from, to, .. } => delivered.push((*from, *to)),
                    _ => {}
                }
            }
            sent.sort_unstable();
            delivered.sort_unstable();
            assert_eq!(sent, delivered, "reliability broken on {label} ({policy})");
            assert_eq!(sent.len() as u64, run.stats.messages_total);
        }
    }
}

#[test]
fn traces_are_byte_identical_across_repeated_runs() {
    for (label, g) in corpus() {
        for policy in SchedulerPolicy::ALL {
            let mut first = Vec::new();
            let mut second = Vec::new();
            simulate(&g, &SimConfig::new(policy, 42))
                .unwrap()
                .trace
                .write_jsonl(&mut first)
                .unwrap();
            simulate(&g, &SimConfig::new(policy, 42))
                .unwrap()
                .trace
                .write_jsonl(&mut second)
                .unwrap();
            assert_eq!(first, second, "{label} ({policy}) replay diverged");
        }
    }
}

#[test]
fn distinct_seeds_can_reorder_but_not_change_the_matching() {
    let g = generate(GraphKind::Complete, 8, 5, &WeightPolicy::DistinctRandom).unwrap();
    let reference = sequential_greedy(&g);
    let mut distinct_traces = BTreeSet::new();
    for seed in 0..20u64 {
        let run = simulate(&g, &SimConfig::new(SchedulerPolicy::Random, seed)).unwrap();
        assert_eq!(run.matching.edges(), reference.edges());
        let mut bytes = Vec::new();
        run.trace.write_jsonl(&mut bytes).unwrap();
        distinct_traces.insert(bytes);
    }
    assert!(
        distinct_traces.len() > 1,
        "different seeds should exercise different delivery orders"
    );
}
