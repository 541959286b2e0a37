//! Greedy weighted matching, sequential and distributed.
//!
//! The distributed protocol runs one tiny state machine per node:
//! every node proposes along its locally heaviest remaining edge, a
//! pair whose proposals meet matches, and matched nodes tell their
//! remaining neighbors to look elsewhere. The result always reaches at
//! least half the weight of an optimal matching, using at most one
//! message per node per incident edge.
//!
//! The crate contains the pieces to run and cross-check that protocol:
//!
//! * [`graph`]: exact-weight graphs and the total edge order that
//!   makes "locally heaviest" unambiguous, plus `generate` for
//!   seedable test families and `format` for a plain text format
//! * [`protocol`]: the per-node state machine, a pure transition
//!   function
//! * [`sim`]: a deterministic discrete-event simulator with pluggable
//!   delivery order, full run traces, and checkers that verify the
//!   protocol's guarantees on every recorded run
//! * [`matching`]: the sequential greedy reference and an exact
//!   optimal-matching oracle to measure against
//!
//! Weights are exact rationals throughout; every run is reproducible
//! from its seed.

pub mod format;
pub mod generate;
pub mod graph;
pub mod matching;
pub mod protocol;
pub mod sim;
pub mod weight;

pub use format::{parse_graph, serialize_graph, FormatError};
pub use generate::{generate, GenerateError, GraphKind, WeightPolicy};
pub use graph::{heavier, Edge, EdgeOrderKey, GraphError, NodeId, WeightedGraph};
pub use matching::{
    candidate, is_valid_matching, matching_weight, optimal_matching,
    optimal_matching_with_limit, sequential_greedy, Matching, MatchingError,
    DEFAULT_ORACLE_LIMIT,
};
pub use protocol::{Message, MessageKind, NodeState, Outbound, ProtocolError, Transition};
pub use sim::{
    check_trace, extract_matching, residual_edge_sets, simulate, CheckKind,
    CheckOutcome, InFlight, LiveSnapshot, MatchEventRecord, RunStats, Scheduler,
    SchedulerPolicy, SimConfig, SimError, SimRun, Trace, TraceError, TraceEvent, Verdict,
};
pub use weight::EdgeWeight;
