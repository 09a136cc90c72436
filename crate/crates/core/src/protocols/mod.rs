//! Next-hop selection for the three compared schemes.
//!
//! Everything here is a pure function of one node's local view; the
//! simulator supplies the view and applies the decision.

mod gpsr;
mod leach;
mod rba;

use std::fmt;
use std::str::FromStr;

pub use gpsr::{
    gabriel_planarize, gpsr_greedy, gpsr_perimeter, gpsr_route, route_packet, GpsrGraph, GreedyOutcome, PerimeterState,
    RouteOutcome,
};
pub use leach::{
    election_threshold, epoch_length, leach_round, ClusterAssignment, LeachError, LeachNode, DEFAULT_HEAD_PROBABILITY,
};
pub use rba::{rba_select, Neighbor};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoutingMode {
    Rba,
    Greedy,
    Perimeter,
    ClusterHead,
    DirectToSink,
    Drop,
}

impl RoutingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RoutingMode::Rba => "rba",
            RoutingMode::Greedy => "greedy",
            RoutingMode::Perimeter => "perimeter",
            RoutingMode::ClusterHead => "cluster-head",
            RoutingMode::DirectToSink => "direct-to-sink",
            RoutingMode::Drop => "drop",
        }
    }
}

/// Where a packet goes next. `next_hop` is `None` exactly when the packet is
/// dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoutingDecision {
    next_hop: Option<NodeId>,
    mode: RoutingMode,
}

impl RoutingDecision {
    /// Panics if `mode` is `Drop`; use [`RoutingDecision::drop`].
    pub fn forward(next_hop: NodeId, mode: RoutingMode) -> Self {
        assert!(mode != RoutingMode::Drop, "a forwarding decision needs a non-drop mode");
        Self { next_hop: Some(next_hop), mode }
    }

    pub fn drop() -> Self {
        Self { next_hop: None, mode: RoutingMode::Drop }
    }

    pub fn next_hop(&self) -> Option<NodeId> {
        self.next_hop
    }

    pub fn mode(&self) -> RoutingMode {
        self.mode
    }

    pub fn is_drop(&self) -> bool {
        self.mode == RoutingMode::Drop
    }
}

/// The routing schemes the simulator can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    Rba,
    Leach,
    Gpsr,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Rba, Protocol::Leach, Protocol::Gpsr];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Rba => "rba",
            Protocol::Leach => "leach",
            Protocol::Gpsr => "gpsr",
        }
    }

    /// Stable index used for seed derivation.
    pub fn index(self) -> u64 {
        match self {
            Protocol::Rba => 0,
            Protocol::Leach => 1,
            Protocol::Gpsr => 2,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rba" => Ok(Protocol::Rba),
            "leach" => Ok(Protocol::Leach),
            "gpsr" => Ok(Protocol::Gpsr),
            other => Err(format!("unknown protocol {other:?} (expected rba, leach or gpsr)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[should_panic]
    fn forward_with_drop_mode_panics() {
        RoutingDecision::forward(3, RoutingMode::Drop);
    }

    #[test]
    fn protocol_names_parse() {
        for p in Protocol::ALL {
            assert_eq!(p.as_str().parse::<Protocol>(), Ok(p));
        }
        assert!("aodv".parse::<Protocol>().is_err());
    }
}
