use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;

use wmsn::geometry::Point;
use wmsn::protocols::Protocol;
use wmsn::sim::{
    build_topology, run_trial, ExperimentSpec, SimParams, SinkEdge, Topology, TrafficModel, TrafficParams, World,
    BYTES_PER_UNIT,
};

fn constant(bytes: u64, fraction: f64) -> TrafficParams {
    TrafficParams { model: TrafficModel::Constant { bytes_per_tick: bytes }, source_fraction: fraction }
}

fn params(protocol: Protocol, capacity: f64) -> SimParams {
    SimParams { protocol, capacity, ..SimParams::default() }
}

#[test]
fn giant_component_percolates() {
    let good = (0..10u64)
        .filter(|&seed| {
            build_topology(200, 200.0, 200.0, 30.0, SinkEdge::Bottom, seed).giant_component_fraction() >= 0.95
        })
        .count();
    assert!(good >= 9, "only {good} of 10 seeds percolate");
}

#[test]
fn quiescent_network_stays_put() {
    for protocol in Protocol::ALL {
        let topology = build_topology(40, 100.0, 100.0, 30.0, SinkEdge::Bottom, 3);
        let mut world = World::new(topology, params(protocol, 100.0), constant(1000, 0.0), 3, 4).unwrap();
        world.run(20);
        for node in world.nodes() {
            assert_eq!(node.energy, 0.5);
            assert_eq!(node.rba(), 100.0);
            assert_eq!(node.predicted_rba, 100.0);
        }
        assert_eq!(world.ledger().emitted, 0);
    }
}

#[test]
fn idle_drain_is_the_only_cost_without_traffic() {
    let topology = build_topology(10, 100.0, 100.0, 30.0, SinkEdge::Bottom, 3);
    let p = SimParams { idle_drain: 0.01, ..params(Protocol::Rba, 100.0) };
    let mut world = World::new(topology, p, constant(1000, 0.0), 3, 4).unwrap();
    world.run(10);
    for node in world.nodes() {
        assert!((node.energy - 0.4).abs() < 1e-12, "{}", node.energy);
    }
}

#[test]
fn single_hop_delivery_same_tick() {
    for protocol in Protocol::ALL {
        let topology = Topology::from_positions(vec![Point::new(50.0, 10.0)], Point::new(50.0, 0.0), 30.0);
        let mut world = World::new(topology, params(protocol, 0.001), constant(1000, 1.0), 1, 2).unwrap();
        let m = world.run(1);
        assert_eq!(m.delivered_bytes_total, 1000, "{protocol}");
        assert_eq!(m.delivered_packets, 1);
        assert_eq!(m.mean_delay_s, 0.0);
    }
}

#[test]
fn relay_queue_grows_by_one_budget_per_tick() {
    // two sources, each a full budget per tick, share one relay next to the sink
    let positions = vec![Point::new(20.0, 0.0), Point::new(38.0, 14.0), Point::new(38.0, -14.0)];
    for protocol in [Protocol::Rba, Protocol::Gpsr] {
        let topology = Topology::from_positions(positions.clone(), Point::new(0.0, 0.0), 25.0);
        let cap = 0.002;
        let budget = (cap * BYTES_PER_UNIT) as u64;
        let mut world = World::new(topology, params(protocol, cap), constant(budget, 1.0), 1, 2).unwrap();
        world.set_sources(&[1, 2]);
        let backlog = |w: &World| w.nodes()[0].queued_bytes() + w.nodes()[0].in_flight_bytes();
        world.step();
        let mut prev = backlog(&world);
        assert_eq!(prev, 2 * budget);
        for _ in 0..10 {
            world.step();
            let now = backlog(&world);
            assert_eq!(now - prev, budget, "{protocol}");
            prev = now;
            assert_eq!(world.nodes()[1].queued_bytes(), 0);
        }
    }
}

#[test]
fn packet_larger_than_budget_is_rejected() {
    let topology = build_topology(5, 50.0, 50.0, 30.0, SinkEdge::Bottom, 1);
    assert!(World::new(topology, params(Protocol::Rba, 0.001), constant(1001, 1.0), 1, 2).is_err());
}

fn busy_world(protocol: Protocol, seed: u64) -> World {
    let topology = build_topology(60, 100.0, 100.0, 30.0, SinkEdge::Bottom, seed);
    let p = SimParams { initial_energy: 0.05, ..params(protocol, 0.004) };
    World::new(topology, p, constant(1500, 0.3), seed, seed + 1).unwrap()
}

#[test]
fn load_matches_recount_and_budget() {
    for protocol in Protocol::ALL {
        let mut world = busy_world(protocol, 5);
        let budget = world.params().budget_bytes();
        for _ in 0..40 {
            world.step();
            let mut sent: HashMap<usize, u64> = HashMap::new();
            for t in world.transmissions() {
                *sent.entry(t.from).or_default() += t.bytes;
            }
            for node in world.nodes() {
                let bytes = sent.get(&node.id).copied().unwrap_or(0);
                assert!(bytes <= budget);
                assert_eq!(node.load, bytes as f64 / world.params().dt / BYTES_PER_UNIT);
                assert_eq!(node.rba(), (node.capacity - node.load).max(0.0));
                assert!(node.predicted_rba >= 0.0 && node.predicted_rba <= node.capacity);
            }
        }
    }
}

#[test]
fn energy_and_alive_count_never_rise() {
    for protocol in Protocol::ALL {
        let mut world = busy_world(protocol, 8);
        let mut energy: Vec<f64> = world.nodes().iter().map(|n| n.energy).collect();
        let mut alive = world.alive_count();
        for _ in 0..80 {
            world.step();
            for (old, node) in energy.iter_mut().zip(world.nodes()) {
                assert!(node.energy <= *old);
                assert_eq!(node.alive, node.energy > 0.0);
                *old = node.energy;
            }
            assert!(world.alive_count() <= alive);
            alive = world.alive_count();
        }
        let timeline = &world.metrics().alive_count_timeline;
        assert!(timeline.windows(2).all(|w| w[1].1 <= w[0].1));
        assert!(alive < 60, "{protocol}: stress run should kill someone");
    }
}

#[test]
fn delivered_packets_end_at_the_sink() {
    let mut world = busy_world(Protocol::Rba, 2);
    let mut delivered = world.metrics().delivered_bytes_total;
    for _ in 0..30 {
        world.step();
        let now = world.metrics().delivered_bytes_total;
        assert!(now >= delivered);
        delivered = now;
        for node in world.nodes() {
            for p in &node.queue {
                assert_eq!(p.hops[0], p.source);
                assert_eq!(p.delivered_tick, None);
            }
        }
    }
}

fn tiny_spec(duration_s: f64) -> ExperimentSpec {
    ExperimentSpec {
        protocols: Protocol::ALL.to_vec(),
        node_counts: vec![30],
        trials: 1,
        base_seed: 9,
        duration_s,
        area_width: 100.0,
        area_height: 100.0,
        radio_range: 30.0,
        sink_edge: SinkEdge::Bottom,
        sim: SimParams::default(),
        traffic: TrafficParams {
            model: TrafficModel::Tracker { payload_sizes: Arc::new(vec![641, 700, 500]), frames_per_tick: 2 },
            source_fraction: 0.2,
        },
    }
}

#[test]
fn zero_length_run_is_empty() {
    for protocol in Protocol::ALL {
        let r = run_trial(&tiny_spec(0.0), protocol, 0, 0).unwrap();
        let m = &r.metrics;
        assert_eq!(m.delivered_bytes_total, 0);
        assert_eq!(m.emitted_bytes, 0);
        assert_eq!(m.drops, 0);
        assert_eq!(m.control_messages, 0);
        assert_eq!(m.mean_delay_s, 0.0);
        assert_eq!(m.alive_count_timeline, vec![(0.0, 30)]);
    }
}

#[test]
fn alive_samples_every_five_seconds() {
    let r = run_trial(&tiny_spec(80.0), Protocol::Gpsr, 0, 0).unwrap();
    let times: Vec<f64> = r.metrics.alive_count_timeline.iter().map(|s| s.0).collect();
    assert_eq!(times, (0..=16).map(|k| k as f64 * 5.0).collect::<Vec<_>>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conservation_holds_every_tick(seed in 0u64..1000, proto in 0usize..3, cap in 0.001f64..0.01) {
        let protocol = Protocol::ALL[proto];
        let topology = build_topology(40, 90.0, 90.0, 30.0, SinkEdge::Bottom, seed);
        let p = SimParams { initial_energy: 0.03, leach_round_s: 3.0, ..params(protocol, cap) };
        let mut world = World::new(topology, p, constant(900, 0.25), seed, seed ^ 1).unwrap();
        for _ in 0..40 {
            world.step();
            let l = world.ledger();
            prop_assert!(l.is_balanced(), "{:?}", l);
        }
    }

    #[test]
    fn same_seed_same_metrics(seed in 0u64..1000, proto in 0usize..3) {
        let protocol = Protocol::ALL[proto];
        let mut a = busy_world(protocol, seed);
        let mut b = busy_world(protocol, seed);
        prop_assert_eq!(a.run(30), b.run(30));
        prop_assert_eq!(a.snapshot(), b.snapshot());
    }
}
