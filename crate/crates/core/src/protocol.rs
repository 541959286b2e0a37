//! Per-node state machine of the distributed greedy matching protocol.
//!
//! Each node keeps the set `N` of neighbors still reachable over
//! non-dropped edges, the set `R` of neighbors it has received requests
//! from, and its current candidate `c`: the neighbor across its locally
//! heaviest remaining edge. A node proposes to its candidate with `req`;
//! a proposal is granted when the candidate proposes back (both ends see
//! the same edge as locally heaviest), and withdrawn edges are announced
//! with `drop`. When a node's request set contains its own candidate the
//! pair is matched: the node drops every other remaining neighbor and
//! terminates with that partner.
//!
//! Transitions are pure values: [`NodeState::on_receive`] maps a state
//! and an incoming message to a new state, outbound messages, and an
//! optional match announcement. Delivery, ordering and assertions about
//! whole runs belong to the simulator in [`crate::sim`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{NodeId, WeightedGraph};
use crate::matching::best_live_neighbor;

/// The two protocol messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageKind {
    /// Proposal along the sender's locally heaviest remaining edge.
    Req,
    /// The sender has withdrawn the shared edge.
    Drop,
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MessageKind::Req => write!(f, "req"),
            MessageKind::Drop => write!(f, "drop"),
        }
    }
}

/// A delivered protocol message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Message {
    pub kind: MessageKind,
    pub sender: NodeId,
}

/// A message this node wants sent; the sender is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outbound {
    pub kind: MessageKind,
    pub to: NodeId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProtocolError {
    /// A terminated node must never process another message.
    #[error("node {node} received {kind} from {sender} after terminating")]
    DeliveredToTerminated {
        node: NodeId,
        sender: NodeId,
        kind: MessageKind,
    },
    #[error("node {node} received a message from non-neighbor {sender}")]
    SenderNotNeighbor { node: NodeId, sender: NodeId },
    /// A second drop over one edge; upstream has violated the
    /// one-message-per-edge bound.
    #[error("node {node} received drop from {sender}, which is no longer live")]
    DropFromDeadNeighbor { node: NodeId, sender: NodeId },
}

/// Result of one transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub state: NodeState,
    pub outbound: Vec<Outbound>,
    /// Set when this transition matched the node with a partner.
    pub matched: Option<NodeId>,
}

/// Protocol state of one node.
///
/// Invariants (hold after `init` and every `on_receive`):
/// * `requests ⊆ neighbors(me)` and `live ⊆ neighbors(me)`
/// * `candidate ∈ live` while the node is running
/// * `terminated ⇔ live = ∅`
/// * `partner` is set only on terminated nodes, and equals the final
///   candidate
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    me: NodeId,
    /// `R`: neighbors whose requests have arrived.
    requests: BTreeSet<NodeId>,
    /// `N`: neighbors still reachable over non-dropped edges.
    live: BTreeSet<NodeId>,
    /// `c`: neighbor across the locally heaviest live edge.
    candidate: Option<NodeId>,
    terminated: bool,
    partner: Option<NodeId>,
}

impl NodeState {
    /// Wakes up node `me`: all neighbors are live, and if there is any
    /// neighbor at all, a request goes to the candidate. Isolated nodes
    /// terminate immediately, unmatched.
    pub fn init(me: NodeId, g: &WeightedGraph) -> (NodeState, Vec<Outbound>) {
        let live: BTreeSet<NodeId> = g.neighbors(me).collect();
        let candidate = best_live_neighbor(g, me, &live);
        let terminated = live.is_empty();
        let outbound = candidate
            .map(|c| {
                vec![Outbound {
                    kind: MessageKind::Req,
                    to: c,
                }]
            })
            .unwrap_or_default();
        let state = NodeState {
            me,
            requests: BTreeSet::new(),
            live,
            candidate,
            terminated,
            partner: None,
        };
        state.check_invariants(g);
        (state, outbound)
    }

    /// Processes one delivered message.
    ///
    /// `req` records the sender in `R`. `drop` removes the sender from
    /// `N`; if the sender was the candidate, a new candidate is chosen
    /// and proposed to. Afterwards, whenever the candidate has itself
    /// requested this node, the pair is matched: drops go to every other
    /// live neighbor, `N` empties, and the node terminates with the
    /// candidate as partner. A node whose `N` empties without a match
    /// terminates unmatched.
    pub fn on_receive(
        &self,
        msg: &Message,
        g: &WeightedGraph,
    ) -> Result<Transition, ProtocolError> {
        if self.terminated {
            return Err(ProtocolError::DeliveredToTerminated {
                node: self.me,
                sender: msg.sender,
                kind: msg.kind,
            });
        }
        if !g.are_adjacent(self.me, msg.sender) {
            return Err(ProtocolError::SenderNotNeighbor {
                node: self.me,
                sender: msg.sender,
            });
        }

        let mut next = self.clone();
        let mut outbound = Vec::new();
        match msg.kind {
            MessageKind::Req => {
                next.requests.insert(msg.sender);
            }
            MessageKind::Drop => {
                if !next.live.remove(&msg.sender) {
                    return Err(ProtocolError::DropFromDeadNeighbor {
                        node: self.me,
                        sender: msg.sender,
                    });
                }
                if next.candidate == Some(msg.sender) {
                    next.candidate = best_live_neighbor(g, next.me, &next.live);
                    if let Some(c) = next.candidate {
                        outbound.push(Outbound {
                            kind: MessageKind::Req,
                            to: c,
                        });
                    }
                }
            }
        }

        let mut matched = None;
        if let Some(c) = next.candidate {
            if next.requests.contains(&c) {
                for &w in next.live.iter().filter(|&&w| w != c) {
                    outbound.push(Outbound {
                        kind: MessageKind::Drop,
                        to: w,
                    });
                }
                next.live.clear();
                next.terminated = true;
                next.partner = Some(c);
                matched = Some(c);
            }
        }
        if next.live.is_empty() {
            next.terminated = true;
        }

        next.check_invariants(g);
        Ok(Transition {
            state: next,
            outbound,
            matched,
        })
    }

    pub fn me(&self) -> NodeId {
        self.me
    }

    pub fn requests(&self) -> &BTreeSet<NodeId> {
        &self.requests
    }

    pub fn live(&self) -> &BTreeSet<NodeId> {
        &self.live
    }

    pub fn candidate(&self) -> Option<NodeId> {
        self.candidate
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    pub fn partner(&self) -> Option<NodeId> {
        self.partner
    }

    fn check_invariants(&self, g: &WeightedGraph) {
        debug_assert_eq!(self.terminated, self.live.is_empty());
        debug_assert!(self.partner.is_none() || self.terminated);
        debug_assert!(self.partner.is_none() || self.partner == self.candidate);
        if !self.terminated {
            debug_assert!(self
                .candidate
                .is_some_and(|c| self.live.contains(&c)));
        }
        debug_assert!(self.live.iter().all(|&x| g.are_adjacent(self.me, x)));
        debug_assert!(self.requests.iter().all(|&x| g.are_adjacent(self.me, x)));
    }

    /// Test-only constructor for exercising simulator error paths that a
    /// correct protocol run can never reach.
    #[cfg(test)]
    pub(crate) fn terminated_for_test(me: NodeId, partner: Option<NodeId>) -> NodeState {
        NodeState {
            me,
            requests: BTreeSet::new(),
            live: BTreeSet::new(),
            candidate: partner,
            terminated: true,
            partner,
        }
    }
}
