//! Deterministic discrete-event simulator for the matching protocol.
//!
//! All nodes wake at step 0 and enqueue their first requests. After
//! that the scheduler repeatedly picks one in-flight message, which is
//! delivered and processed atomically; the run ends when nothing is in
//! flight. Reordering across the pool is unrestricted, which models a
//! fully asynchronous reliable network: per-channel ordering is moot
//! because no node ever sends twice over the same directed edge.
//!
//! A message can arrive after its receiver has already terminated: a
//! pair may match and drop its remaining neighbors while those
//! neighbors' own requests to the pair are still in flight. The
//! simulator absorbs such messages, recording the delivery but never
//! invoking the receiver's handler, mirroring a node that has left its
//! receive loop for good.
//!
//! Every run is replayable: given the same graph and [`SimConfig`],
//! the trace, matching and statistics are identical.

mod check;
mod scheduler;
mod trace;

pub use check::{
    check_trace, residual_edge_sets, CheckKind, CheckOutcome, TraceError, Verdict,
};
pub use scheduler::{Scheduler, SchedulerPolicy};
pub use trace::{LiveSnapshot, MatchEventRecord, RunStats, Trace, TraceEvent};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{NodeId, WeightedGraph};
use crate::matching::{Matching, MatchingError};
use crate::protocol::{Message, MessageKind, NodeState, Outbound, ProtocolError};

/// A sent but not yet delivered message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InFlight {
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: MessageKind,
    pub send_step: u64,
}

/// Violations of guarantees the protocol is supposed to give. Any of
/// these on a well-formed graph is an implementation bug, not a valid
/// outcome.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    /// A node tried to send a second message over one directed edge.
    #[error("node {from} sent a second message to {to}")]
    DuplicateSend { from: NodeId, to: NodeId },
    /// Circuit breaker against nontermination; unreachable while the
    /// per-edge send bound holds.
    #[error("delivery count exceeded {limit}, twice the edge count")]
    DeliveryBudgetExceeded { limit: u64 },
    #[error("no messages left in flight but node {node} has not terminated")]
    UnterminatedNode { node: NodeId },
    #[error("node {a} ended partnered with {b}, but {b} did not reciprocate")]
    AsymmetricPartners { a: NodeId, b: NodeId },
    #[error("partners {a} and {b} share no edge")]
    PartnerNotAdjacent { a: NodeId, b: NodeId },
    /// Continuous consistency check: an edge not yet removed by a match
    /// must keep both endpoints in each other's live sets.
    #[error("edge {u}-{v} is still unmatched but not mutually live")]
    MutualLivenessViolation { u: NodeId, v: NodeId },
    #[error(transparent)]
    InvalidMatching(#[from] MatchingError),
}

/// Run parameters. `policy` and `seed` fix the delivery order.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub policy: SchedulerPolicy,
    pub seed: u64,
    /// Record live-set snapshots at wake-up and after each match. The
    /// mutual-liveness trace check needs them; on by default.
    pub record_snapshots: bool,
    /// Verify after every delivery that both endpoints of every
    /// unmatched edge still list each other as live. Costs an extra
    /// O(|E|) per step; off by default.
    pub continuous_liveness_check: bool,
}

impl SimConfig {
    pub fn new(policy: SchedulerPolicy, seed: u64) -> SimConfig {
        SimConfig {
            policy,
            seed,
            record_snapshots: true,
            continuous_liveness_check: false,
        }
    }
}

/// Everything one simulation produced.
#[derive(Debug, Clone)]
pub struct SimRun {
    pub matching: Matching,
    pub trace: Trace,
    pub stats: RunStats,
    pub final_states: Vec<NodeState>,
}

/// Runs the protocol on `g` to completion.
pub fn simulate(g: &WeightedGraph, config: &SimConfig) -> Result<SimRun, SimError> {
    let mut scheduler = Scheduler::new(config.policy, config.seed);
    let mut events: Vec<TraceEvent> = Vec::new();
    let mut inflight: Vec<InFlight> = Vec::new();
    let mut sent: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut records: Vec<MatchEventRecord> = Vec::new();
    // node -> partner it announced; used to pair the two endpoint
    // announcements of one match into a single record
    let mut announced: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut req_count = 0u64;
    let mut drop_count = 0u64;

    let mut states: Vec<NodeState> = Vec::with_capacity(g.vertex_count());
    for v in g.node_ids() {
        let (state, outbound) = NodeState::init(v, g);
        for ob in &outbound {
            send(
                0, v, ob, &mut sent, &mut inflight, &mut events, &mut req_count,
                &mut drop_count,
            )?;
        }
        if state.is_terminated() {
            events.push(TraceEvent::Terminate {
                step: 0,
                node: v,
                partner: None,
            });
        }
        states.push(state);
    }
    if config.record_snapshots {
        events.push(snapshot_event(0, 0, &states));
    }

    let budget = 2 * g.edge_count() as u64;
    let mut step = 0u64;
    while !inflight.is_empty() {
        step += 1;
        if step > budget {
            return Err(SimError::DeliveryBudgetExceeded { limit: budget });
        }
        let picked = scheduler.pick(&inflight, g);
        let m = inflight.remove(picked);
        let receiver = m.dst;

        if states[receiver.index()].is_terminated() {
            events.push(TraceEvent::Deliver {
                step,
                from: m.src,
                to: m.dst,
                msg: m.kind,
                absorbed: true,
            });
            continue;
        }
        events.push(TraceEvent::Deliver {
            step,
            from: m.src,
            to: m.dst,
            msg: m.kind,
            absorbed: false,
        });

        let transition = states[receiver.index()].on_receive(
            &Message {
                kind: m.kind,
                sender: m.src,
            },
            g,
        )?;
        for ob in &transition.outbound {
            send(
                step, receiver, ob, &mut sent, &mut inflight, &mut events,
                &mut req_count, &mut drop_count,
            )?;
        }
        states[receiver.index()] = transition.state;

        let mut new_record = false;
        if let Some(partner) = transition.matched {
            if announced.get(&partner) == Some(&receiver) {
                // second endpoint of an already recorded match
            } else {
                debug_assert!(!announced.contains_key(&receiver));
                announced.insert(receiver, partner);
                let index = records.len() + 1;
                records.push(MatchEventRecord {
                    index,
                    step,
                    a: receiver,
                    b: partner,
                });
                events.push(TraceEvent::Match {
                    step,
                    index,
                    a: receiver,
                    b: partner,
                });
                new_record = true;
            }
        }
        if states[receiver.index()].is_terminated() {
            events.push(TraceEvent::Terminate {
                step,
                node: receiver,
                partner: states[receiver.index()].partner(),
            });
        }
        if new_record && config.record_snapshots {
            events.push(snapshot_event(step, records.len(), &states));
        }
        if config.continuous_liveness_check {
            verify_mutual_liveness(g, &states, &records)?;
        }
    }

    for state in &states {
        if !state.is_terminated() {
            return Err(SimError::UnterminatedNode { node: state.me() });
        }
    }
    let matching = extract_matching(g, &states)?;
    let stats = RunStats {
        messages_total: req_count + drop_count,
        messages_req: req_count,
        messages_drop: drop_count,
        matched_pairs: records.len(),
        matching_weight: matching.total_weight(),
        steps: step,
    };
    Ok(SimRun {
        matching,
        trace: Trace { events },
        stats,
        final_states: states,
    })
}

#[allow(clippy::too_many_arguments)]
fn send(
    step: u64,
    from: NodeId,
    ob: &Outbound,
    sent: &mut BTreeSet<(NodeId, NodeId)>,
    inflight: &mut Vec<InFlight>,
    events: &mut Vec<TraceEvent>,
    req_count: &mut u64,
    drop_count: &mut u64,
) -> Result<(), SimError> {
    if !sent.insert((from, ob.to)) {
        return Err(SimError::DuplicateSend { from, to: ob.to });
    }
    match ob.kind {
        MessageKind::Req => *req_count += 1,
        MessageKind::Drop => *drop_count += 1,
    }
    events.push(TraceEvent::Send {
        step,
        from,
        to: ob.to,
        msg: ob.kind,
    });
    inflight.push(InFlight {
        src: from,
        dst: ob.to,
        kind: ob.kind,
        send_step: step,
    });
    Ok(())
}

fn snapshot_event(step: u64, index: usize, states: &[NodeState]) -> TraceEvent {
    TraceEvent::Snapshot {
        step,
        index,
        live: states
            .iter()
            .map(|s| s.live().iter().copied().collect())
            .collect(),
    }
}

fn verify_mutual_liveness(
    g: &WeightedGraph,
    states: &[NodeState],
    records: &[MatchEventRecord],
) -> Result<(), SimError> {
    let matched: BTreeSet<NodeId> = records
        .iter()
        .flat_map(|r| [r.a, r.b])
        .collect();
    for e in g.edges() {
        if matched.contains(&e.u()) || matched.contains(&e.v()) {
            continue;
        }
        let mutual = states[e.u().index()].live().contains(&e.v())
            && states[e.v().index()].live().contains(&e.u());
        if !mutual {
            return Err(SimError::MutualLivenessViolation { u: e.u(), v: e.v() });
        }
    }
    Ok(())
}

/// Reads the matching off terminated node states, validating that
/// partner declarations are symmetric and lie on real edges.
pub fn extract_matching(
    g: &WeightedGraph,
    states: &[NodeState],
) -> Result<Matching, SimError> {
    let mut edges = Vec::new();
    for state in states {
        let Some(partner) = state.partner() else {
            continue;
        };
        let back = states
            .get(partner.index())
            .and_then(|other| other.partner());
        if back != Some(state.me()) {
            return Err(SimError::AsymmetricPartners {
                a: state.me(),
                b: partner,
            });
        }
        if state.me() < partner {
            let edge = g.edge_between(state.me(), partner).ok_or(
                SimError::PartnerNotAdjacent {
                    a: state.me(),
                    b: partner,
                },
            )?;
            edges.push(edge.clone());
        }
    }
    Ok(Matching::from_edges(g, edges)?)
}
