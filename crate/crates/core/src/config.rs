//! Experiment configuration: a flat `section.key = value` text file.
//!
//! ```text
//! # comments start with '#'
//! experiment.protocols = rba, leach, gpsr
//! experiment.node_counts = 50:800:50
//! predictor.epsilon = 0.01
//! ```
//!
//! Node counts accept a comma list, a `start:stop:step` range, or both mixed.
//! Unknown keys are rejected and every violated constraint is reported at
//! once.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::predictor::PredictorParams;
use crate::protocols::{Protocol, DEFAULT_HEAD_PROBABILITY};
use crate::sim::{
    tracker_payload_sizes, ExperimentSpec, RadioModel, SimError, SimParams, SinkEdge, TrafficModel, TrafficParams,
};
use crate::tracker::{BlobSequence, TrackConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrafficKind {
    Tracker,
    Constant,
}

impl TrafficKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TrafficKind::Tracker => "tracker",
            TrafficKind::Constant => "constant",
        }
    }
}

impl FromStr for TrafficKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tracker" => Ok(TrafficKind::Tracker),
            "constant" => Ok(TrafficKind::Constant),
            other => Err(format!("unknown traffic model {other:?} (expected tracker or constant)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub protocols: Vec<Protocol>,
    pub node_counts: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub duration_s: f64,
    pub sample_interval_s: f64,

    pub area_width: f64,
    pub area_height: f64,
    pub radio_range: f64,
    pub sink_edge: SinkEdge,

    /// Bandwidth units (MB/s).
    pub capacity: f64,
    pub initial_energy: f64,

    pub epsilon: f64,
    pub dt: f64,
    pub a0: f64,
    pub v0: f64,

    pub e_elec: f64,
    pub eps_amp: f64,
    pub idle_drain: f64,
    pub probe_cost: f64,

    pub traffic_model: TrafficKind,
    pub source_fraction: f64,
    pub constant_bytes: u64,
    /// Side of the synthetic frames the tracker traffic is derived from.
    pub frame_side: usize,
    pub frames_per_tick: usize,

    pub leach_p: f64,
    pub leach_round_s: f64,
    pub max_hops: usize,

    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let sim = SimParams::default();
        Self {
            protocols: Protocol::ALL.to_vec(),
            node_counts: (50..=800).step_by(50).collect(),
            trials: 10,
            base_seed: 1,
            duration_s: 80.0,
            sample_interval_s: sim.sample_interval_s,
            area_width: 200.0,
            area_height: 200.0,
            radio_range: 30.0,
            sink_edge: SinkEdge::Bottom,
            capacity: sim.capacity,
            initial_energy: sim.initial_energy,
            epsilon: sim.predictor.epsilon,
            dt: sim.dt,
            a0: sim.initial_accel,
            v0: sim.initial_variance,
            e_elec: sim.radio.e_elec,
            eps_amp: sim.radio.eps_amp,
            idle_drain: sim.idle_drain,
            probe_cost: sim.probe_energy,
            traffic_model: TrafficKind::Tracker,
            source_fraction: 0.1,
            constant_bytes: 1000,
            frame_side: 128,
            frames_per_tick: 1,
            leach_p: DEFAULT_HEAD_PROBABILITY,
            leach_round_s: sim.leach_round_s,
            max_hops: sim.max_hops,
            output_dir: PathBuf::from("out"),
        }
    }
}

const KEYS: &[&str] = &[
    "experiment.protocols",
    "experiment.node_counts",
    "experiment.trials",
    "experiment.base_seed",
    "experiment.duration_s",
    "experiment.sample_interval_s",
    "topology.area_width",
    "topology.area_height",
    "topology.radio_range",
    "topology.sink_edge",
    "node.capacity",
    "node.initial_energy",
    "predictor.epsilon",
    "predictor.dt",
    "predictor.a0",
    "predictor.v0",
    "energy.e_elec",
    "energy.eps_amp",
    "energy.idle_drain",
    "energy.probe_cost",
    "traffic.model",
    "traffic.source_fraction",
    "traffic.constant_bytes",
    "traffic.frame_side",
    "traffic.frames_per_tick",
    "leach.p",
    "leach.round_s",
    "routing.max_hops",
    "output.dir",
];

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

fn parse_node_counts(value: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let fields: Vec<&str> = part.split(':').map(str::trim).collect();
        let num = |s: &str| s.parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
        match fields.as_slice() {
            [one] => out.push(num(one)?),
            [start, stop, step] => {
                let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
                if step == 0 {
                    return Err(format!("range {part:?} has a zero step"));
                }
                if start > stop {
                    return Err(format!("range {part:?} is empty"));
                }
                out.extend((start..=stop).step_by(step));
            }
            _ => return Err(format!("{part:?} is neither a count nor start:stop:step")),
        }
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Parse and validate. Every problem found is reported.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut problems = Vec::new();
        let mut seen = std::collections::HashSet::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                problems.push(format!("line {line_no}: expected `key = value`"));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                problems.push(format!("line {line_no}: unknown key {key:?}"));
                continue;
            }
            if !seen.insert(key.to_string()) {
                problems.push(format!("line {line_no}: duplicate key {key:?}"));
                continue;
            }
            if let Err(e) = cfg.set(key, value) {
                problems.push(format!("line {line_no}: {key}: {e}"));
            }
        }

        problems.extend(cfg.violations());
        if problems.is_empty() {
            Ok(cfg)
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| format!("{v:?}: {e}"))
        }
        match key {
            "experiment.protocols" => self.protocols = parse_list(value)?,
            "experiment.node_counts" => self.node_counts = parse_node_counts(value)?,
            "experiment.trials" => self.trials = num(value)?,
            "experiment.base_seed" => self.base_seed = num(value)?,
            "experiment.duration_s" => self.duration_s = num(value)?,
            "experiment.sample_interval_s" => self.sample_interval_s = num(value)?,
            "topology.area_width" => self.area_width = num(value)?,
            "topology.area_height" => self.area_height = num(value)?,
            "topology.radio_range" => self.radio_range = num(value)?,
            "topology.sink_edge" => self.sink_edge = value.parse()?,
            "node.capacity" => self.capacity = num(value)?,
            "node.initial_energy" => self.initial_energy = num(value)?,
            "predictor.epsilon" => self.epsilon = num(value)?,
            "predictor.dt" => self.dt = num(value)?,
            "predictor.a0" => self.a0 = num(value)?,
            "predictor.v0" => self.v0 = num(value)?,
            "energy.e_elec" => self.e_elec = num(value)?,
            "energy.eps_amp" => self.eps_amp = num(value)?,
            "energy.idle_drain" => self.idle_drain = num(value)?,
            "energy.probe_cost" => self.probe_cost = num(value)?,
            "traffic.model" => self.traffic_model = value.parse()?,
            "traffic.source_fraction" => self.source_fraction = num(value)?,
            "traffic.constant_bytes" => self.constant_bytes = num(value)?,
            "traffic.frame_side" => self.frame_side = num(value)?,
            "traffic.frames_per_tick" => self.frames_per_tick = num(value)?,
            "leach.p" => self.leach_p = num(value)?,
            "leach.round_s" => self.leach_round_s = num(value)?,
            "routing.max_hops" => self.max_hops = num(value)?,
            "output.dir" => self.output_dir = PathBuf::from(value),
            _ => unreachable!("key list checked by caller"),
        }
        Ok(())
    }

    /// Every constraint the current values break.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut positive = |name: &str, v: f64| {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("{name} must be > 0, got {v}"));
            }
        };
        positive("experiment.sample_interval_s", self.sample_interval_s);
        positive("topology.area_width", self.area_width);
        positive("topology.area_height", self.area_height);
        positive("topology.radio_range", self.radio_range);
        positive("node.capacity", self.capacity);
        positive("node.initial_energy", self.initial_energy);
        positive("predictor.epsilon", self.epsilon);
        positive("predictor.dt", self.dt);
        positive("leach.round_s", self.leach_round_s);

        let mut non_negative = |name: &str, v: f64| {
            if !(v >= 0.0 && v.is_finite()) {
                out.push(format!("{name} must be >= 0, got {v}"));
            }
        };
        non_negative("experiment.duration_s", self.duration_s);
        non_negative("predictor.v0", self.v0);
        non_negative("energy.e_elec", self.e_elec);
        non_negative("energy.eps_amp", self.eps_amp);
        non_negative("energy.idle_drain", self.idle_drain);
        non_negative("energy.probe_cost", self.probe_cost);

        if !self.a0.is_finite() {
            out.push(format!("predictor.a0 must be finite, got {}", self.a0));
        }
        if self.protocols.is_empty() {
            out.push("experiment.protocols must list at least one protocol".into());
        }
        let mut unique = self.protocols.clone();
        unique.sort();
        unique.dedup();
        if unique.len() != self.protocols.len() {
            out.push("experiment.protocols lists a protocol twice".into());
        }
        if self.node_counts.is_empty() {
            out.push("experiment.node_counts must list at least one count".into());
        }
        if self.node_counts.contains(&0) {
            out.push("experiment.node_counts must all be >= 1".into());
        }
        if self.trials == 0 {
            out.push("experiment.trials must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.source_fraction) {
            out.push(format!("traffic.source_fraction must lie in [0, 1], got {}", self.source_fraction));
        }
        if self.traffic_model == TrafficKind::Constant && self.constant_bytes == 0 {
            out.push("traffic.constant_bytes must be >= 1".into());
        }
        if self.frame_side < 16 {
            out.push(format!("traffic.frame_side must be >= 16, got {}", self.frame_side));
        }
        if self.frames_per_tick == 0 {
            out.push("traffic.frames_per_tick must be >= 1".into());
        }
        if !(self.leach_p > 0.0 && self.leach_p < 1.0) {
            out.push(format!("leach.p must lie in (0, 1), got {}", self.leach_p));
        }
        if self.max_hops == 0 {
            out.push("routing.max_hops must be >= 1".into());
        }
        out
    }

    /// Canonical text form; [`ExperimentConfig::parse`] reads it back to an
    /// equal value.
    pub fn to_text(&self) -> String {
        let protocols: Vec<&str> = self.protocols.iter().map(|p| p.as_str()).collect();
        let counts: Vec<String> = self.node_counts.iter().map(usize::to_string).collect();
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("experiment.protocols", protocols.join(", "));
        kv("experiment.node_counts", counts.join(", "));
        kv("experiment.trials", self.trials.to_string());
        kv("experiment.base_seed", self.base_seed.to_string());
        kv("experiment.duration_s", format!("{:?}", self.duration_s));
        kv("experiment.sample_interval_s", format!("{:?}", self.sample_interval_s));
        kv("topology.area_width", format!("{:?}", self.area_width));
        kv("topology.area_height", format!("{:?}", self.area_height));
        kv("topology.radio_range", format!("{:?}", self.radio_range));
        kv("topology.sink_edge", self.sink_edge.to_string());
        kv("node.capacity", format!("{:?}", self.capacity));
        kv("node.initial_energy", format!("{:?}", self.initial_energy));
        kv("predictor.epsilon", format!("{:?}", self.epsilon));
        kv("predictor.dt", format!("{:?}", self.dt));
        kv("predictor.a0", format!("{:?}", self.a0));
        kv("predictor.v0", format!("{:?}", self.v0));
        kv("energy.e_elec", format!("{:?}", self.e_elec));
        kv("energy.eps_amp", format!("{:?}", self.eps_amp));
        kv("energy.idle_drain", format!("{:?}", self.idle_drain));
        kv("energy.probe_cost", format!("{:?}", self.probe_cost));
        kv("traffic.model", self.traffic_model.as_str().to_string());
        kv("traffic.source_fraction", format!("{:?}", self.source_fraction));
        kv("traffic.constant_bytes", self.constant_bytes.to_string());
        kv("traffic.frame_side", self.frame_side.to_string());
        kv("traffic.frames_per_tick", self.frames_per_tick.to_string());
        kv("leach.p", format!("{:?}", self.leach_p));
        kv("leach.round_s", format!("{:?}", self.leach_round_s));
        kv("routing.max_hops", self.max_hops.to_string());
        kv("output.dir", self.output_dir.display().to_string());
        out
    }

    pub fn sim_params(&self) -> SimParams {
        SimParams {
            protocol: self.protocols.first().copied().unwrap_or(Protocol::Rba),
            dt: self.dt,
            capacity: self.capacity,
            initial_energy: self.initial_energy,
            radio: RadioModel { e_elec: self.e_elec, eps_amp: self.eps_amp },
            idle_drain: self.idle_drain,
            probe_energy: self.probe_cost,
            predictor: PredictorParams { epsilon: self.epsilon, dt: self.dt },
            initial_accel: self.a0,
            initial_variance: self.v0,
            leach_p: self.leach_p,
            leach_round_s: self.leach_round_s,
            max_hops: self.max_hops,
            sample_interval_s: self.sample_interval_s,
        }
    }

    /// The blob sequence whose compressed stream drives tracker traffic.
    pub fn traffic_blob(&self) -> BlobSequence {
        let side = self.frame_side as f64;
        let sigma = side / 128.0 * BlobSequence::default().sigma;
        BlobSequence {
            width: self.frame_side,
            height: self.frame_side,
            start: (4.0 * sigma + 2.0, side / 2.0),
            sigma,
            ..BlobSequence::default()
        }
    }

    pub fn traffic_params(&self) -> Result<TrafficParams, ConfigError> {
        let model = match self.traffic_model {
            TrafficKind::Constant => TrafficModel::Constant { bytes_per_tick: self.constant_bytes },
            TrafficKind::Tracker => TrafficModel::Tracker {
                payload_sizes: Arc::new(tracker_payload_sizes(&self.traffic_blob(), &TrackConfig::default())?),
                frames_per_tick: self.frames_per_tick,
            },
        };
        Ok(TrafficParams { model, source_fraction: self.source_fraction })
    }

    pub fn experiment_spec(&self) -> Result<ExperimentSpec, ConfigError> {
        let problems = self.violations();
        if !problems.is_empty() {
            return Err(ConfigError::Invalid(problems));
        }
        Ok(ExperimentSpec {
            protocols: self.protocols.clone(),
            node_counts: self.node_counts.clone(),
            trials: self.trials,
            base_seed: self.base_seed,
            duration_s: self.duration_s,
            area_width: self.area_width,
            area_height: self.area_height,
            radio_range: self.radio_range,
            sink_edge: self.sink_edge,
            sim: self.sim_params(),
            traffic: self.traffic_params()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let cfg = ExperimentConfig::default();
        assert!(cfg.violations().is_empty());
        let back = ExperimentConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(cfg.node_counts.len(), 16);
    }

    #[test]
    fn node_count_forms() {
        assert_eq!(parse_node_counts("50:200:50, 400").unwrap(), vec![50, 100, 150, 200, 400]);
        assert!(parse_node_counts("5:1:1").is_err());
        assert!(parse_node_counts("1:5:0").is_err());
    }

    #[test]
    fn every_violation_is_listed() {
        let text = "experiment.trials = 0\nnode.capacity = -1\nbogus.key = 3\nleach.p = 1.5\n";
        let ConfigError::Invalid(problems) = ExperimentConfig::parse(text).unwrap_err() else {
            panic!("expected validation error");
        };
        assert_eq!(problems.len(), 4, "{problems:?}");
        assert!(problems.iter().any(|p| p.contains("bogus.key")));
        assert!(problems.iter().any(|p| p.contains("experiment.trials")));
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = ExperimentConfig::parse("# hi\n\nexperiment.protocols = gpsr # only\n").unwrap();
        assert_eq!(cfg.protocols, vec![Protocol::Gpsr]);
    }

    #[test]
    fn duplicate_key_rejected() {
        assert!(ExperimentConfig::parse("experiment.trials = 2\nexperiment.trials = 3\n").is_err());
    }
}
