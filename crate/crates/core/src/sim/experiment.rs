use std::fmt::Write as _;

use rayon::prelude::*;

use super::metrics::Metrics;
use super::seed::{protocol_seed, trial_seed};
use super::topology::{build_topology, SinkEdge};
use super::world::{SimParams, TrafficParams, World};
use super::SimError;
use crate::protocols::Protocol;
use crate::tracker::{track_gray_sequence, BlobSequence, TrackConfig};

pub const DELIVERED_CSV_HEADER: &str = "protocol,n,trial,seed,delivered_bytes,mean_delay_s,drops,control_msgs";
pub const ALIVE_CSV_HEADER: &str = "protocol,t_s,alive_count,trial,seed";

/// A full trial matrix: every protocol at every node count, `trials` times.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub protocols: Vec<Protocol>,
    pub node_counts: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub duration_s: f64,
    pub area_width: f64,
    pub area_height: f64,
    pub radio_range: f64,
    pub sink_edge: SinkEdge,
    /// The `protocol` field is overridden per run.
    pub sim: SimParams,
    pub traffic: TrafficParams,
}

impl ExperimentSpec {
    pub fn ticks(&self) -> u64 {
        (self.duration_s / self.sim.dt).round() as u64
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let mut problems = Vec::new();
        if self.protocols.is_empty() {
            problems.push("at least one protocol is required".to_string());
        }
        if self.node_counts.is_empty() {
            problems.push("at least one node count is required".to_string());
        }
        if self.node_counts.contains(&0) {
            problems.push("node counts must be >= 1".to_string());
        }
        if self.trials == 0 {
            problems.push("trials must be >= 1".to_string());
        }
        if !(self.duration_s >= 0.0 && self.duration_s.is_finite()) {
            problems.push(format!("duration must be >= 0, got {}", self.duration_s));
        }
        for (name, v) in
            [("area width", self.area_width), ("area height", self.area_height), ("radio range", self.radio_range)]
        {
            if !(v > 0.0 && v.is_finite()) {
                problems.push(format!("{name} must be > 0, got {v}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SimError::Invalid(problems))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub protocol: Protocol,
    pub n: usize,
    pub cell: usize,
    pub trial: usize,
    /// Topology and traffic seed of the trial.
    pub seed: u64,
    pub metrics: Metrics,
}

/// Payload sizes of the compressed stream produced by tracking `blob`.
pub fn tracker_payload_sizes(blob: &BlobSequence, config: &TrackConfig) -> Result<Vec<u64>, SimError> {
    let traffic = |e: crate::tracker::TrackError| SimError::Traffic(e.to_string());
    blob.validate().map_err(traffic)?;
    let frames = blob.gray_frames().map_err(traffic)?;
    let records = track_gray_sequence(&frames, blob.initial_window(), config).map_err(traffic)?;
    Ok(records.iter().map(|r| r.payload_bytes as u64).collect())
}

/// Run one cell of the matrix. Byte conservation is checked at every
/// alive-count sample; a violation is an internal error.
pub fn run_trial(
    spec: &ExperimentSpec,
    protocol: Protocol,
    cell: usize,
    trial: usize,
) -> Result<TrialResult, SimError> {
    let n = spec.node_counts[cell];
    let seed = trial_seed(spec.base_seed, cell as u64, trial as u64);
    let topology = build_topology(n, spec.area_width, spec.area_height, spec.radio_range, spec.sink_edge, seed);
    let params = SimParams { protocol, ..spec.sim.clone() };
    let pseed = protocol_seed(spec.base_seed, protocol.index(), cell as u64, trial as u64);
    let mut world = World::new(topology, params, spec.traffic.clone(), seed, pseed)?;
    let samples_before = world.metrics().alive_count_timeline.len();
    let mut seen = samples_before;
    for _ in 0..spec.ticks() {
        world.step();
        if world.metrics().alive_count_timeline.len() != seen {
            seen = world.metrics().alive_count_timeline.len();
            let ledger = world.ledger();
            if !ledger.is_balanced() {
                return Err(SimError::Conservation { tick: world.tick(), ledger: format!("{ledger:?}") });
            }
        }
    }
    Ok(TrialResult { protocol, n, cell, trial, seed, metrics: world.metrics().clone() })
}

/// Run every (protocol, node count, trial) cell on `jobs` worker threads
/// (0 = rayon's default). Results come back ordered by protocol as listed,
/// then node count, then trial, whatever the scheduling.
pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<Vec<TrialResult>, SimError> {
    spec.validate()?;
    let cells: Vec<(Protocol, usize, usize)> = spec
        .protocols
        .iter()
        .flat_map(|&p| (0..spec.node_counts.len()).flat_map(move |c| (0..spec.trials).map(move |t| (p, c, t))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SimError::Invalid(vec![format!("cannot start {jobs} worker threads: {e}")]))?;
    pool.install(|| cells.par_iter().map(|&(p, c, t)| run_trial(spec, p, c, t)).collect())
}

pub fn delivered_csv(results: &[TrialResult]) -> String {
    let mut out = String::from(DELIVERED_CSV_HEADER);
    out.push('\n');
    for r in results {
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6},{},{}",
            r.protocol, r.n, r.trial, r.seed, m.delivered_bytes_total, m.mean_delay_s, m.drops, m.control_messages
        );
    }
    out
}

/// Alive-count samples of the results with `n` nodes.
pub fn alive_csv(results: &[TrialResult], n: usize) -> String {
    let mut out = String::from(ALIVE_CSV_HEADER);
    out.push('\n');
    for r in results.iter().filter(|r| r.n == n) {
        for &(t, alive) in &r.metrics.alive_count_timeline {
            let _ = writeln!(out, "{},{},{},{},{}", r.protocol, t, alive, r.trial, r.seed);
        }
    }
    out
}
