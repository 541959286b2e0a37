//! Delivery policies: the asynchrony adversary.
//!
//! The simulator keeps every sent-but-undelivered message in one pool;
//! a scheduler decides which of them the network hands over next. Any
//! policy that always picks some pooled message models reliable but
//! arbitrarily reordered delivery.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::InFlight;
use crate::graph::{Edge, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SchedulerPolicy {
    /// Deliver in send order.
    Fifo,
    /// Deliver the most recently sent message first.
    Lifo,
    /// Pick uniformly at random, driven by the seed.
    Random,
    /// Deliver the message crossing the lightest edge first, so traffic
    /// on heavy edges waits as long as possible.
    AdversarialHeavyLast,
}

impl SchedulerPolicy {
    pub const ALL: [SchedulerPolicy; 4] = [
        SchedulerPolicy::Fifo,
        SchedulerPolicy::Lifo,
        SchedulerPolicy::Random,
        SchedulerPolicy::AdversarialHeavyLast,
    ];
}

impl fmt::Display for SchedulerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SchedulerPolicy::Fifo => "fifo",
            SchedulerPolicy::Lifo => "lifo",
            SchedulerPolicy::Random => "random",
            SchedulerPolicy::AdversarialHeavyLast => "adversarial",
        };
        write!(f, "{name}")
    }
}

impl FromStr for SchedulerPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fifo" => Ok(SchedulerPolicy::Fifo),
            "lifo" => Ok(SchedulerPolicy::Lifo),
            "random" => Ok(SchedulerPolicy::Random),
            "adversarial" | "adversarial-heavy-last" => {
                Ok(SchedulerPolicy::AdversarialHeavyLast)
            }
            other => Err(format!(
                "unknown scheduler {other:?}; expected fifo, lifo, random or adversarial"
            )),
        }
    }
}

/// Deterministic message picker: same policy and seed, same choices.
#[derive(Debug, Clone)]
pub struct Scheduler {
    policy: SchedulerPolicy,
    rng: ChaCha8Rng,
}

impl Scheduler {
    pub fn new(policy: SchedulerPolicy, seed: u64) -> Scheduler {
        Scheduler {
            policy,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn policy(&self) -> SchedulerPolicy {
        self.policy
    }

    /// Index into `inflight` of the message delivered next.
    /// `inflight` must be nonempty.
    pub fn pick(&mut self, inflight: &[InFlight], g: &WeightedGraph) -> usize {
        assert!(!inflight.is_empty(), "nothing in flight to pick from");
        match self.policy {
            SchedulerPolicy::Fifo => 0,
            SchedulerPolicy::Lifo => inflight.len() - 1,
            SchedulerPolicy::Random => self.rng.gen_range(0..inflight.len()),
            SchedulerPolicy::AdversarialHeavyLast => {
                // lightest edge wins; ties (the two directions of one
                // edge) go to the older message
                let mut best = 0;
                for i in 1..inflight.len() {
                    let lighter = edge_of(g, &inflight[best])
                        .order_cmp(edge_of(g, &inflight[i]))
                        == Ordering::Less;
                    if lighter {
                        best = i;
                    }
                }
                best
            }
        }
    }
}

fn edge_of<'g>(g: &'g WeightedGraph, m: &InFlight) -> &'g Edge {
    g.edge_between(m.src, m.dst)
        .expect("in-flight messages travel along graph edges")
}
