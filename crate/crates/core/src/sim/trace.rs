//! Run records: serial event log, match events, live-set snapshots.
//!
//! A trace is the complete observable history of one simulation. The
//! checkers in [`super::check`] consume it; [`Trace::write_jsonl`]
//! exports it for external tools, one JSON object per line.

use std::io::{self, Write};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::graph::NodeId;
use crate::protocol::MessageKind;

/// One entry of the serial event log, in global order.
///
/// `step` is the delivery counter: step 0 is wake-up, and each later
/// step delivers exactly one in-flight message. All events caused by
/// one delivery share its step number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// A node handed a message to the network.
    Send {
        step: u64,
        from: NodeId,
        to: NodeId,
        msg: MessageKind,
    },
    /// The network delivered a message. `absorbed` marks deliveries to
    /// an already terminated receiver; those are discarded unprocessed.
    Deliver {
        step: u64,
        from: NodeId,
        to: NodeId,
        msg: MessageKind,
        absorbed: bool,
    },
    /// Two nodes committed to each other; `index` counts matches from 1.
    Match {
        step: u64,
        index: usize,
        a: NodeId,
        b: NodeId,
    },
    /// The node will neither send nor process anything further.
    Terminate {
        step: u64,
        node: NodeId,
        partner: Option<NodeId>,
    },
    /// Live neighbor sets of every node, recorded at wake-up (`index` 0)
    /// and again right after match event `index`.
    Snapshot {
        step: u64,
        index: usize,
        live: Vec<Vec<NodeId>>,
    },
}

/// The i-th match of a run: nodes `a` and `b` paired at `step`.
/// `a` is the endpoint that detected the match first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchEventRecord {
    pub index: usize,
    pub step: u64,
    pub a: NodeId,
    pub b: NodeId,
}

impl MatchEventRecord {
    /// Endpoints of the matched edge in canonical (lo, hi) order.
    pub fn endpoints(&self) -> (NodeId, NodeId) {
        if self.a < self.b {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }
}

/// Fix of every node's live neighbor set at one match boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiveSnapshot {
    pub index: usize,
    pub step: u64,
    /// `live[v]` holds the live neighbors of node v, ascending.
    pub live: Vec<Vec<NodeId>>,
}

/// Complete observable history of one simulation run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    /// Match events in occurrence order.
    pub fn match_records(&self) -> Vec<MatchEventRecord> {
        self.events
            .iter()
            .filter_map(|ev| match *ev {
                TraceEvent::Match { step, index, a, b } => {
                    Some(MatchEventRecord { index, step, a, b })
                }
                _ => None,
            })
            .collect()
    }

    /// Live-set snapshots in occurrence order; empty when the run was
    /// recorded without them.
    pub fn snapshots(&self) -> Vec<LiveSnapshot> {
        self.events
            .iter()
            .filter_map(|ev| match ev {
                TraceEvent::Snapshot { step, index, live } => Some(LiveSnapshot {
                    index: *index,
                    step: *step,
                    live: live.clone(),
                }),
                _ => None,
            })
            .collect()
    }

    /// Writes the log as JSON lines, one event per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for ev in &self.events {
            serde_json::to_writer(&mut out, ev)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Summary counters of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStats {
    /// Messages sent over the whole run; never exceeds 2 per edge.
    pub messages_total: u64,
    pub messages_req: u64,
    pub messages_drop: u64,
    pub matched_pairs: usize,
    pub matching_weight: BigRational,
    /// Delivery steps taken, absorbed deliveries included.
    pub steps: u64,
}
