use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::energy::RadioModel;
use super::metrics::{ByteLedger, Metrics};
use super::seed::stream_rng;
use super::topology::Topology;
use super::SimError;
use crate::geometry::{distance, in_forward_region};
use crate::predictor::{measure_rba, update_and_predict, PredictorParams, PredictorState};
use crate::protocols::{
    gpsr_route, leach_round, rba_select, ClusterAssignment, GpsrGraph, LeachNode, Neighbor, NodeId, PerimeterState,
    Protocol, RoutingDecision, RoutingMode,
};

/// Bytes per second in one bandwidth unit (1 MB/s).
pub const BYTES_PER_UNIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub protocol: Protocol,
    /// Tick length, seconds.
    pub dt: f64,
    /// Per-node forwarding capacity, bandwidth units (MB/s).
    pub capacity: f64,
    /// Joules per node at start.
    pub initial_energy: f64,
    pub radio: RadioModel,
    /// Joules per second drawn by every live node regardless of traffic.
    pub idle_drain: f64,
    /// Joules per probe or probe response.
    pub probe_energy: f64,
    pub predictor: PredictorParams,
    pub initial_accel: f64,
    pub initial_variance: f64,
    pub leach_p: f64,
    /// LEACH re-election period, seconds.
    pub leach_round_s: f64,
    /// Packets that have taken this many hops without delivery are dropped.
    pub max_hops: usize,
    /// Alive-count sampling period, seconds.
    pub sample_interval_s: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            protocol: Protocol::Rba,
            dt: 1.0,
            capacity: 100.0,
            initial_energy: 0.5,
            radio: RadioModel::default(),
            idle_drain: 0.0,
            probe_energy: 0.0,
            predictor: PredictorParams { epsilon: 0.01, dt: 1.0 },
            initial_accel: 0.0,
            initial_variance: 1.0,
            leach_p: 0.05,
            leach_round_s: 20.0,
            max_hops: 256,
            sample_interval_s: 5.0,
        }
    }
}

impl SimParams {
    /// Forwarding budget per node per tick, bytes.
    pub fn budget_bytes(&self) -> u64 {
        (self.capacity * self.dt * BYTES_PER_UNIT).floor() as u64
    }

    fn sample_every_ticks(&self) -> u64 {
        ((self.sample_interval_s / self.dt).round() as u64).max(1)
    }

    fn leach_round_ticks(&self) -> u64 {
        ((self.leach_round_s / self.dt).round() as u64).max(1)
    }
}

/// What each source emits per tick.
#[derive(Debug, Clone, PartialEq)]
pub enum TrafficModel {
    /// One packet of fixed size per tick.
    Constant { bytes_per_tick: u64 },
    /// Replay a compressed-stream size sequence, `frames_per_tick` packets
    /// per tick, cycling. Each source starts at its own offset.
    Tracker { payload_sizes: Arc<Vec<u64>>, frames_per_tick: usize },
}

impl TrafficModel {
    pub fn largest_packet(&self) -> u64 {
        match self {
            TrafficModel::Constant { bytes_per_tick } => *bytes_per_tick,
            TrafficModel::Tracker { payload_sizes, .. } => payload_sizes.iter().copied().max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficParams {
    pub model: TrafficModel,
    /// Fraction of nodes that are video sources; at least one when `n >= 1`
    /// and the fraction is positive.
    pub source_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub id: u64,
    pub source: NodeId,
    pub size: u64,
    pub created_tick: u64,
    /// Nodes visited, starting at the source.
    pub hops: Vec<NodeId>,
    pub delivered_tick: Option<u64>,
    perimeter: Option<PerimeterState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub id: NodeId,
    /// Bandwidth units.
    pub capacity: f64,
    /// Bandwidth units forwarded during the last tick.
    pub load: f64,
    pub energy: f64,
    pub alive: bool,
    pub predictor: PredictorState,
    /// Clamped to `[0, capacity]`.
    pub predicted_rba: f64,
    pub queue: VecDeque<Packet>,
    /// Packets received this tick; they join `queue` at the start of the next.
    inbox: Vec<Packet>,
    forwarded_bytes: u64,
    spent: f64,
}

impl NodeState {
    pub fn rba(&self) -> f64 {
        measure_rba(self.capacity, self.load)
    }

    pub fn queued_bytes(&self) -> u64 {
        self.queue.iter().map(|p| p.size).sum()
    }

    pub fn in_flight_bytes(&self) -> u64 {
        self.inbox.iter().map(|p| p.size).sum()
    }

    /// Bytes this node transmitted in the last completed tick.
    pub fn forwarded_bytes(&self) -> u64 {
        self.forwarded_bytes
    }
}

/// One hop taken by one packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transmission {
    pub from: NodeId,
    pub to: NodeId,
    pub bytes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Source {
    node: NodeId,
    cursor: usize,
}

#[derive(Debug, Clone)]
struct LeachRuntime {
    nodes: Vec<LeachNode>,
    assignment: ClusterAssignment,
    round: Option<u64>,
}

/// One simulated network.
#[derive(Debug, Clone)]
pub struct World {
    params: SimParams,
    topology: Topology,
    traffic: TrafficParams,
    nodes: Vec<NodeState>,
    /// Live adjacency over nodes and sink (sink id = n).
    live: Vec<Vec<NodeId>>,
    gpsr: Option<GpsrGraph>,
    leach: Option<LeachRuntime>,
    sources: Vec<Source>,
    rng: ChaCha8Rng,
    tick: u64,
    next_packet_id: u64,
    ledger: ByteLedger,
    metrics: Metrics,
    delay_sum_ticks: u64,
    transmissions: Vec<Transmission>,
}

impl World {
    /// `traffic_seed` picks sources and their stream offsets; `protocol_seed`
    /// drives protocol-internal randomness.
    pub fn new(
        topology: Topology,
        params: SimParams,
        traffic: TrafficParams,
        traffic_seed: u64,
        protocol_seed: u64,
    ) -> Result<Self, SimError> {
        validate(&params, &traffic)?;
        let n = topology.node_count();
        let budget = params.budget_bytes();
        if traffic.model.largest_packet() > budget {
            return Err(SimError::PacketTooLarge { packet: traffic.model.largest_packet(), budget });
        }

        let nodes = (0..n)
            .map(|id| NodeState {
                id,
                capacity: params.capacity,
                load: 0.0,
                energy: params.initial_energy,
                alive: params.initial_energy > 0.0,
                predictor: PredictorState::with_prior(params.initial_accel, params.initial_variance),
                predicted_rba: params.capacity,
                queue: VecDeque::new(),
                inbox: Vec::new(),
                forwarded_bytes: 0,
                spent: 0.0,
            })
            .collect();

        let mut traffic_rng = stream_rng(traffic_seed, 1);
        let source_count = if n == 0 || traffic.source_fraction <= 0.0 {
            0
        } else {
            ((traffic.source_fraction * n as f64).round() as usize).clamp(1, n)
        };
        let mut ids: Vec<NodeId> = (0..n).collect();
        ids.shuffle(&mut traffic_rng);
        let stream_len = match &traffic.model {
            TrafficModel::Tracker { payload_sizes, .. } => payload_sizes.len().max(1),
            TrafficModel::Constant { .. } => 1,
        };
        let mut sources: Vec<Source> = ids[..source_count]
            .iter()
            .map(|&node| Source { node, cursor: traffic_rng.gen_range(0..stream_len) })
            .collect();
        sources.sort_by_key(|s| s.node);

        let leach = (params.protocol == Protocol::Leach).then(|| LeachRuntime {
            nodes: topology.positions().iter().map(|&p| LeachNode::new(p)).collect(),
            assignment: ClusterAssignment::default(),
            round: None,
        });

        let mut world = Self {
            live: topology.adjacency().to_vec(),
            params,
            topology,
            traffic,
            nodes,
            gpsr: None,
            leach,
            sources,
            rng: stream_rng(protocol_seed, 2),
            tick: 0,
            next_packet_id: 0,
            ledger: ByteLedger::default(),
            metrics: Metrics::default(),
            delay_sum_ticks: 0,
            transmissions: Vec::new(),
        };
        world.refresh_links();
        let alive = world.alive_count();
        world.metrics.alive_count_timeline.push((0.0, alive));
        Ok(world)
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn sources(&self) -> Vec<NodeId> {
        self.sources.iter().map(|s| s.node).collect()
    }

    /// Replace the randomly drawn sources; every stream starts at offset 0.
    pub fn set_sources(&mut self, nodes: &[NodeId]) {
        let mut nodes = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        self.sources =
            nodes.into_iter().filter(|&n| n < self.nodes.len()).map(|node| Source { node, cursor: 0 }).collect();
    }

    /// Hops taken during the last completed tick, in transmission order.
    pub fn transmissions(&self) -> &[Transmission] {
        &self.transmissions
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn time_s(&self) -> f64 {
        self.tick as f64 * self.params.dt
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn alive_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.alive).count()
    }

    /// Live neighbors of a node, sink id included when in range.
    pub fn live_neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.live[id]
    }

    /// Byte accounting recounted from the current queues.
    pub fn ledger(&self) -> ByteLedger {
        ByteLedger {
            queued: self.nodes.iter().map(NodeState::queued_bytes).sum(),
            in_flight: self.nodes.iter().map(NodeState::in_flight_bytes).sum(),
            ..self.ledger
        }
    }

    /// One line per node: `id,x,y,energy,alive,load`.
    pub fn snapshot(&self) -> String {
        let mut out = String::new();
        for (node, p) in self.nodes.iter().zip(self.topology.positions()) {
            let _ = writeln!(
                out,
                "{},{:.3},{:.3},{:.6},{},{:.6}",
                node.id,
                p.x,
                p.y,
                node.energy,
                u8::from(node.alive),
                node.load
            );
        }
        out
    }

    /// Run `ticks` ticks and return the metrics so far.
    pub fn run(&mut self, ticks: u64) -> Metrics {
        for _ in 0..ticks {
            self.step();
        }
        self.metrics.clone()
    }

    /// Advance one tick.
    pub fn step(&mut self) {
        let sink = self.topology.sink_id();

        // last tick's receptions become forwardable
        for node in &mut self.nodes {
            let arrived = std::mem::take(&mut node.inbox);
            node.queue.extend(arrived);
            node.forwarded_bytes = 0;
            node.spent = 0.0;
        }

        self.transmissions.clear();
        self.emit();
        if self.params.protocol == Protocol::Leach {
            self.leach_reelect();
        }

        let budget = self.params.budget_bytes();
        for id in 0..self.nodes.len() {
            if !self.nodes[id].alive {
                continue;
            }
            let mut remaining = budget;
            while let Some(front) = self.nodes[id].queue.front() {
                if front.size > remaining {
                    break;
                }
                let mut packet = self.nodes[id].queue.pop_front().expect("front exists");
                let decision = self.decide(id, &mut packet);
                let Some(next) = decision.next_hop() else {
                    self.drop_packet(&packet);
                    continue;
                };
                remaining -= packet.size;
                let d = distance(self.topology.position(id), self.topology.position(next));
                let node = &mut self.nodes[id];
                node.forwarded_bytes += packet.size;
                node.spent += self.params.radio.tx_energy(packet.size, d);
                packet.hops.push(next);
                self.transmissions.push(Transmission { from: id, to: next, bytes: packet.size });
                if next == sink {
                    packet.delivered_tick = Some(self.tick);
                    self.ledger.delivered += packet.size;
                    self.metrics.delivered_bytes_total += packet.size;
                    self.metrics.delivered_packets += 1;
                    self.delay_sum_ticks += self.tick - packet.created_tick;
                } else {
                    let receiver = &mut self.nodes[next];
                    receiver.spent += self.params.radio.rx_energy(packet.size);
                    receiver.inbox.push(packet);
                }
            }
        }

        // loads, RBA and predictions
        for node in &mut self.nodes {
            node.load = node.forwarded_bytes as f64 / self.params.dt / BYTES_PER_UNIT;
            if !node.alive {
                continue;
            }
            let rba = node.rba();
            let (state, step) =
                update_and_predict(&node.predictor, &self.params.predictor, rba).expect("RBA is finite and >= 0");
            node.predictor = state;
            node.predicted_rba = step.prediction.min(node.capacity);
        }

        // energy and deaths
        let mut died = false;
        for id in 0..self.nodes.len() {
            let idle = self.params.idle_drain * self.params.dt;
            let node = &mut self.nodes[id];
            if !node.alive {
                continue;
            }
            node.energy = (node.energy - node.spent - idle).max(0.0);
            if node.energy <= 0.0 {
                node.alive = false;
                died = true;
                let lost: Vec<Packet> = node.queue.drain(..).chain(node.inbox.drain(..)).collect();
                for p in &lost {
                    self.drop_packet(p);
                }
            }
        }
        if died {
            self.refresh_links();
        }

        self.tick += 1;
        if self.metrics.delivered_packets > 0 {
            self.metrics.mean_delay_s =
                self.delay_sum_ticks as f64 * self.params.dt / self.metrics.delivered_packets as f64;
        }
        self.metrics.emitted_bytes = self.ledger.emitted;
        self.metrics.dropped_bytes = self.ledger.dropped;
        if self.tick.is_multiple_of(self.params.sample_every_ticks()) {
            let alive = self.alive_count();
            self.metrics.alive_count_timeline.push((self.time_s(), alive));
        }
    }

    fn emit(&mut self) {
        for i in 0..self.sources.len() {
            let Source { node, cursor } = self.sources[i];
            if !self.nodes[node].alive {
                continue;
            }
            let sizes: Vec<u64> = match &self.traffic.model {
                TrafficModel::Constant { bytes_per_tick } => vec![*bytes_per_tick],
                TrafficModel::Tracker { payload_sizes, frames_per_tick } => {
                    let len = payload_sizes.len();
                    let sizes = (0..*frames_per_tick).map(|k| payload_sizes[(cursor + k) % len]).collect();
                    self.sources[i].cursor = (cursor + frames_per_tick) % len;
                    sizes
                }
            };
            for size in sizes.into_iter().filter(|&s| s > 0) {
                let packet = Packet {
                    id: self.next_packet_id,
                    source: node,
                    size,
                    created_tick: self.tick,
                    hops: vec![node],
                    delivered_tick: None,
                    perimeter: None,
                };
                self.next_packet_id += 1;
                self.ledger.emitted += size;
                self.nodes[node].queue.push_back(packet);
            }
        }
    }

    fn drop_packet(&mut self, packet: &Packet) {
        self.ledger.dropped += packet.size;
        self.metrics.drops += 1;
    }

    fn refresh_links(&mut self) {
        let sink = self.topology.sink_id();
        let alive: Vec<bool> = self.nodes.iter().map(|n| n.alive).chain(std::iter::once(true)).collect();
        self.live = (0..=sink)
            .map(|u| {
                if !alive[u] {
                    return Vec::new();
                }
                self.topology.neighbors(u).iter().copied().filter(|&v| alive[v]).collect()
            })
            .collect();
        if self.params.protocol == Protocol::Gpsr {
            let mut positions = self.topology.positions().to_vec();
            positions.push(self.topology.sink());
            self.gpsr = Some(GpsrGraph::new(positions, self.live.clone()));
        }
    }

    fn leach_reelect(&mut self) {
        let round = self.tick / self.params.leach_round_ticks();
        let runtime = self.leach.as_mut().expect("LEACH state exists");
        if runtime.round == Some(round) {
            return;
        }
        for (ln, node) in runtime.nodes.iter_mut().zip(&self.nodes) {
            ln.alive = node.alive;
        }
        runtime.assignment = leach_round(&mut runtime.nodes, round, self.params.leach_p, &mut self.rng)
            .expect("LEACH probability validated");
        runtime.round = Some(round);
        // one advertisement per head, one join per member
        let members = runtime.assignment.head_of.iter().enumerate().filter(|(i, h)| h.is_some_and(|h| h != *i)).count();
        self.metrics.control_messages += (runtime.assignment.heads.len() + members) as u64;
    }

    fn decide(&mut self, at: NodeId, packet: &mut Packet) -> RoutingDecision {
        if packet.hops.len() > self.params.max_hops {
            return RoutingDecision::drop();
        }
        match self.params.protocol {
            Protocol::Rba => self.decide_rba(at, packet),
            Protocol::Gpsr => {
                let graph = self.gpsr.as_ref().expect("GPSR graph built");
                let prev = packet.hops.len().checked_sub(2).map(|i| packet.hops[i]);
                gpsr_route(graph, at, prev, self.topology.sink_id(), &mut packet.perimeter)
            }
            Protocol::Leach => self.decide_leach(at, packet),
        }
    }

    fn decide_rba(&mut self, at: NodeId, packet: &Packet) -> RoutingDecision {
        let sink_id = self.topology.sink_id();
        let here = self.topology.position(at);
        let sink = self.topology.sink();
        let candidates: Vec<Neighbor> = self.live[at]
            .iter()
            .filter(|v| !packet.hops.contains(v))
            .map(|&v| Neighbor {
                id: v,
                position: self.topology.position(v),
                predicted_rba: if v == sink_id { f64::INFINITY } else { self.nodes[v].predicted_rba },
            })
            .collect();
        let Ok(decision) = rba_select(here, sink, &candidates) else {
            // sender sits on the sink
            return RoutingDecision::forward(sink_id, RoutingMode::DirectToSink);
        };

        // probe to every live neighbor in the forward region, one reply each
        let responders: Vec<NodeId> = candidates
            .iter()
            .filter(|c| c.id != sink_id && in_forward_region(c.position, here, sink).unwrap_or(false))
            .map(|c| c.id)
            .collect();
        self.metrics.control_messages += 1 + responders.len() as u64;
        if self.params.probe_energy > 0.0 {
            self.nodes[at].spent += self.params.probe_energy;
            for r in responders {
                self.nodes[r].spent += self.params.probe_energy;
            }
        }
        decision
    }

    fn decide_leach(&self, at: NodeId, packet: &Packet) -> RoutingDecision {
        let sink_id = self.topology.sink_id();
        let runtime = self.leach.as_ref().expect("LEACH state exists");
        let assignment = &runtime.assignment;
        let direct = RoutingDecision::forward(sink_id, RoutingMode::DirectToSink);
        if assignment.head_of.get(at).copied().flatten() == Some(at) {
            return direct;
        }
        let here = self.topology.position(at);
        let head = match assignment.head_of.get(at).copied().flatten() {
            Some(h) if self.nodes[h].alive => Some(h),
            _ => assignment
                .heads
                .iter()
                .copied()
                .filter(|&h| self.nodes[h].alive)
                .map(|h| (distance(here, self.topology.position(h)), h))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                .map(|(_, h)| h),
        };
        match head {
            Some(h) if !packet.hops.contains(&h) => RoutingDecision::forward(h, RoutingMode::ClusterHead),
            _ => direct,
        }
    }
}

fn validate(params: &SimParams, traffic: &TrafficParams) -> Result<(), SimError> {
    let mut problems = Vec::new();
    let positive = |name: &str, v: f64, problems: &mut Vec<String>| {
        if !(v > 0.0 && v.is_finite()) {
            problems.push(format!("{name} must be > 0, got {v}"));
        }
    };
    let non_negative = |name: &str, v: f64, problems: &mut Vec<String>| {
        if !(v >= 0.0 && v.is_finite()) {
            problems.push(format!("{name} must be >= 0, got {v}"));
        }
    };
    positive("dt", params.dt, &mut problems);
    positive("capacity", params.capacity, &mut problems);
    non_negative("initial energy", params.initial_energy, &mut problems);
    non_negative("e_elec", params.radio.e_elec, &mut problems);
    non_negative("eps_amp", params.radio.eps_amp, &mut problems);
    non_negative("idle drain", params.idle_drain, &mut problems);
    non_negative("probe energy", params.probe_energy, &mut problems);
    non_negative("initial variance", params.initial_variance, &mut problems);
    positive("sample interval", params.sample_interval_s, &mut problems);
    positive("LEACH round length", params.leach_round_s, &mut problems);
    if let Err(e) = params.predictor.validate() {
        problems.push(e.to_string());
    }
    if !(params.leach_p > 0.0 && params.leach_p < 1.0) {
        problems.push(format!("LEACH p must lie in (0, 1), got {}", params.leach_p));
    }
    if params.max_hops == 0 {
        problems.push("max hops must be >= 1".into());
    }
    if !(0.0..=1.0).contains(&traffic.source_fraction) {
        problems.push(format!("source fraction must lie in [0, 1], got {}", traffic.source_fraction));
    }
    if let TrafficModel::Tracker { payload_sizes, frames_per_tick } = &traffic.model {
        if payload_sizes.is_empty() {
            problems.push("tracker traffic needs at least one payload size".into());
        }
        if *frames_per_tick == 0 {
            problems.push("frames per tick must be >= 1".into());
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(SimError::Invalid(problems))
    }
}
