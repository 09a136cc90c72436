//! Tick-based network simulator and experiment runner.

mod energy;
mod experiment;
mod metrics;
mod seed;
mod topology;
mod world;

use thiserror::Error;

pub use energy::RadioModel;
pub use experiment::{
    alive_csv, delivered_csv, run_experiment, run_trial, tracker_payload_sizes, ExperimentSpec, TrialResult,
    ALIVE_CSV_HEADER, DELIVERED_CSV_HEADER,
};
pub use metrics::{ByteLedger, Metrics};
pub use seed::{derive_seed, protocol_seed, splitmix64, stream_rng, trial_seed};
pub use topology::{build_topology, SinkEdge, Topology};
pub use world::{NodeState, Packet, SimParams, TrafficModel, TrafficParams, Transmission, World, BYTES_PER_UNIT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid simulation parameters: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("packet of {packet} bytes exceeds the per-tick forwarding budget of {budget} bytes")]
    PacketTooLarge { packet: u64, budget: u64 },
    #[error("byte conservation violated at tick {tick}: {ledger}")]
    Conservation { tick: u64, ledger: String },
    #[error("traffic generation failed: {0}")]
    Traffic(String),
}
