//! Trace checkers: mechanical verification of the protocol's
//! guarantees on a recorded run.
//!
//! Five independent checks, each answering one question about a trace:
//!
//! * message bound: no node sent twice over one directed edge, and the
//!   total send count is at most twice the edge count
//! * residual membership: every matched edge still existed when its
//!   match fired, i.e. neither endpoint was matched before
//! * local heaviness: every matched edge was heavier than every other
//!   surviving edge it touches
//! * termination: every node terminated exactly once, terminate
//!   partners agree with the match events, and no edge survives the run
//! * mutual liveness: at every recorded boundary, both endpoints of
//!   every surviving edge still list each other as live
//!
//! A run that fails any of these exposes a bug in the protocol or the
//! simulator; the checkers exist so such a bug cannot hide.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{heavier, Edge, NodeId, WeightedGraph};
use crate::sim::trace::{LiveSnapshot, MatchEventRecord, Trace, TraceEvent};

/// The five checks, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    MessageBound,
    ResidualMembership,
    LocalHeaviness,
    Termination,
    MutualLiveness,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::MessageBound,
        CheckKind::ResidualMembership,
        CheckKind::LocalHeaviness,
        CheckKind::Termination,
        CheckKind::MutualLiveness,
    ];
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CheckKind::MessageBound => "message-bound",
            CheckKind::ResidualMembership => "residual-membership",
            CheckKind::LocalHeaviness => "local-heaviness",
            CheckKind::Termination => "termination",
            CheckKind::MutualLiveness => "mutual-liveness",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    /// The property is violated; the string pinpoints where.
    Fail(String),
    /// The trace lacks the data this check needs.
    Skipped(String),
}

impl CheckOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: CheckKind,
    pub outcome: CheckOutcome,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            CheckOutcome::Pass => write!(f, "{}: pass", self.kind),
            CheckOutcome::Fail(why) => write!(f, "{}: FAIL ({why})", self.kind),
            CheckOutcome::Skipped(why) => write!(f, "{}: skipped ({why})", self.kind),
        }
    }
}

/// The trace does not even describe a run of this graph; no verdicts
/// can be formed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("event {position} names node {node}, but the graph has {vertex_count} vertices")]
    NodeOutOfRange {
        position: usize,
        node: NodeId,
        vertex_count: usize,
    },
    #[error("match event at position {position} has index {found}, expected {expected}")]
    MatchIndexOutOfOrder {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("snapshot at position {position} covers {found} nodes, expected {expected}")]
    SnapshotSizeMismatch {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("snapshot at position {position} has index {index}, but only {matches} matches occurred")]
    SnapshotIndexOutOfRange {
        position: usize,
        index: usize,
        matches: usize,
    },
}

/// Edge sets E_0 ⊇ E_1 ⊇ ... ⊇ E_t: E_i is the graph minus every edge
/// incident to one of the first i matched pairs.
pub fn residual_edge_sets(
    g: &WeightedGraph,
    records: &[MatchEventRecord],
) -> Vec<Vec<Edge>> {
    let mut sets = Vec::with_capacity(records.len() + 1);
    let mut current: Vec<Edge> = g.edges().to_vec();
    sets.push(current.clone());
    for r in records {
        current.retain(|e| !e.touches(r.a) && !e.touches(r.b));
        sets.push(current.clone());
    }
    sets
}

/// Runs all five checks against a recorded trace of a run on `g`.
///
/// Returns one verdict per check, in [`CheckKind::ALL`] order. An `Err`
/// means the trace is structurally foreign to the graph and no check
/// could run at all.
pub fn check_trace(g: &WeightedGraph, trace: &Trace) -> Result<Vec<Verdict>, TraceError> {
    validate_structure(g, trace)?;
    let records = trace.match_records();
    let residuals = residual_edge_sets(g, &records);
    Ok(vec![
        Verdict {
            kind: CheckKind::MessageBound,
            outcome: check_message_bound(g, trace),
        },
        Verdict {
            kind: CheckKind::ResidualMembership,
            outcome: check_residual_membership(g, &records, &residuals),
        },
        Verdict {
            kind: CheckKind::LocalHeaviness,
            outcome: check_local_heaviness(g, &records, &residuals),
        },
        Verdict {
            kind: CheckKind::Termination,
            outcome: check_termination(g, trace, &records, &residuals),
        },
        Verdict {
            kind: CheckKind::MutualLiveness,
            outcome: check_mutual_liveness(trace, &residuals),
        },
    ])
}

fn validate_structure(g: &WeightedGraph, trace: &Trace) -> Result<(), TraceError> {
    let n = g.vertex_count();
    let in_range = |position: usize, node: NodeId| {
        if node.index() < n {
            Ok(())
        } else {
            Err(TraceError::NodeOutOfRange {
                position,
                node,
                vertex_count: n,
            })
        }
    };
    let total_matches = trace.match_records().len();
    let mut next_match_index = 1;
    for (position, ev) in trace.events.iter().enumerate() {
        match ev {
            TraceEvent::Send { from, to, .. }
            | TraceEvent::Deliver { from, to, .. } => {
                in_range(position, *from)?;
                in_range(position, *to)?;
            }
            TraceEvent::Match { index, a, b, .. } => {
                in_range(position, *a)?;
                in_range(position, *b)?;
                if *index != next_match_index {
                    return Err(TraceError::MatchIndexOutOfOrder {
                        position,
                        expected: next_match_index,
                        found: *index,
                    });
                }
                next_match_index += 1;
            }
            TraceEvent::Terminate { node, partner, .. } => {
                in_range(position, *node)?;
                if let Some(p) = partner {
                    in_range(position, *p)?;
                }
            }
            TraceEvent::Snapshot { index, live, .. } => {
                if live.len() != n {
                    return Err(TraceError::SnapshotSizeMismatch {
                        position,
                        expected: n,
                        found: live.len(),
                    });
                }
                for neighbors in live {
                    for neighbor in neighbors {
                        in_range(position, *neighbor)?;
                    }
                }
                if *index > total_matches {
                    return Err(TraceError::SnapshotIndexOutOfRange {
                        position,
                        index: *index,
                        matches: total_matches,
                    });
                }
            }
        }
    }
    Ok(())
}

fn check_message_bound(g: &WeightedGraph, trace: &Trace) -> CheckOutcome {
    let mut seen: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut total: u64 = 0;
    for ev in &trace.events {
        let TraceEvent::Send { from, to, .. } = ev else {
            continue;
        };
        total += 1;
        if !g.are_adjacent(*from, *to) {
            return CheckOutcome::Fail(format!(
                "message from {from} to {to} crosses no edge"
            ));
        }
        if !seen.insert((*from, *to)) {
            return CheckOutcome::Fail(format!("{from} sent twice to {to}"));
        }
    }
    let limit = 2 * g.edge_count() as u64;
    if total > limit {
        return CheckOutcome::Fail(format!("{total} messages sent, limit {limit}"));
    }
    CheckOutcome::Pass
}

fn check_residual_membership(
    g: &WeightedGraph,
    records: &[MatchEventRecord],
    residuals: &[Vec<Edge>],
) -> CheckOutcome {
    for r in records {
        let (lo, hi) = r.endpoints();
        if g.edge_between(lo, hi).is_none() {
            return CheckOutcome::Fail(format!(
                "match {} pairs {lo} and {hi}, which share no edge",
                r.index
            ));
        }
        let still_there = residuals[r.index - 1]
            .iter()
            .any(|e| e.endpoints() == (lo, hi));
        if !still_there {
            return CheckOutcome::Fail(format!(
                "match {} uses edge {lo}-{hi}, already removed by an earlier match",
                r.index
            ));
        }
    }
    CheckOutcome::Pass
}

fn check_local_heaviness(
    g: &WeightedGraph,
    records: &[MatchEventRecord],
    residuals: &[Vec<Edge>],
) -> CheckOutcome {
    for r in records {
        let (lo, hi) = r.endpoints();
        let Some(edge) = g.edge_between(lo, hi) else {
            return CheckOutcome::Fail(format!(
                "match {} pairs {lo} and {hi}, which share no edge",
                r.index
            ));
        };
        for other in &residuals[r.index - 1] {
            if other.endpoints() == (lo, hi) || !other.shares_endpoint(edge) {
                continue;
            }
            if !heavier(edge, other) {
                return CheckOutcome::Fail(format!(
                    "match {} edge {lo}-{hi} is not heavier than surviving edge {}-{}",
                    r.index,
                    other.u(),
                    other.v()
                ));
            }
        }
    }
    CheckOutcome::Pass
}

fn check_termination(
    g: &WeightedGraph,
    trace: &Trace,
    records: &[MatchEventRecord],
    residuals: &[Vec<Edge>],
) -> CheckOutcome {
    let n = g.vertex_count();
    let mut times_terminated = vec![0usize; n];
    let mut reported_partner: Vec<Option<NodeId>> = vec![None; n];
    for ev in &trace.events {
        if let TraceEvent::Terminate { node, partner, .. } = ev {
            times_terminated[node.index()] += 1;
            reported_partner[node.index()] = *partner;
        }
    }
    for v in g.node_ids() {
        match times_terminated[v.index()] {
            0 => return CheckOutcome::Fail(format!("node {v} never terminated")),
            1 => {}
            k => return CheckOutcome::Fail(format!("node {v} terminated {k} times")),
        }
    }

    let mut expected_partner: Vec<Option<NodeId>> = vec![None; n];
    for r in records {
        for (node, partner) in [(r.a, r.b), (r.b, r.a)] {
            if expected_partner[node.index()].is_some() {
                return CheckOutcome::Fail(format!(
                    "node {node} appears in more than one match event"
                ));
            }
            expected_partner[node.index()] = Some(partner);
        }
    }
    for v in g.node_ids() {
        if reported_partner[v.index()] != expected_partner[v.index()] {
            return CheckOutcome::Fail(format!(
                "node {v} terminated with partner {:?}, match events say {:?}",
                reported_partner[v.index()],
                expected_partner[v.index()]
            ));
        }
    }

    if let Some(edge) = residuals.last().and_then(|set| set.first()) {
        return CheckOutcome::Fail(format!(
            "edge {}-{} survives all matches",
            edge.u(),
            edge.v()
        ));
    }
    CheckOutcome::Pass
}

fn check_mutual_liveness(trace: &Trace, residuals: &[Vec<Edge>]) -> CheckOutcome {
    let snapshots: Vec<LiveSnapshot> = trace.snapshots();
    if snapshots.is_empty() {
        return CheckOutcome::Skipped("trace carries no snapshots".to_string());
    }
    for snap in &snapshots {
        for edge in &residuals[snap.index] {
            let (u, v) = edge.endpoints();
            let mutual = snap.live[u.index()].contains(&v)
                && snap.live[v.index()].contains(&u);
            if !mutual {
                return CheckOutcome::Fail(format!(
                    "at snapshot {}, surviving edge {u}-{v} is not mutually live",
                    snap.index
                ));
            }
        }
    }
    CheckOutcome::Pass
}
