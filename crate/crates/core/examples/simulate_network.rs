// One RBA-routed network driven by tracker traffic, tick by tick.

use std::error::Error;
use std::sync::Arc;

use wmsn::protocols::Protocol;
use wmsn::sim::{
    build_topology, protocol_seed, tracker_payload_sizes, trial_seed, SimParams, SinkEdge, TrafficModel, TrafficParams,
    World,
};
use wmsn::tracker::{BlobSequence, TrackConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let sizes = tracker_payload_sizes(&BlobSequence::default(), &TrackConfig::default())?;
    let seed = trial_seed(7, 0, 0);
    let topology = build_topology(120, 100.0, 100.0, 30.0, SinkEdge::Bottom, seed);
    let params = SimParams { protocol: Protocol::Rba, capacity: 0.005, ..SimParams::default() };
    let traffic = TrafficParams {
        model: TrafficModel::Tracker { payload_sizes: Arc::new(sizes), frames_per_tick: 4 },
        source_fraction: 0.1,
    };
    let mut world = World::new(topology, params, traffic, seed, protocol_seed(7, 0, 0, 0))?;
    println!("sources: {:?}", world.sources());

    for _ in 0..4 {
        world.run(5);
        let ledger = world.ledger();
        println!(
            "t={:>3}s delivered {:>7} B queued {:>6} B dropped {:>5} B alive {}",
            world.time_s(),
            ledger.delivered,
            ledger.queued,
            ledger.dropped,
            world.alive_count()
        );
        assert!(ledger.is_balanced());
    }
    let m = world.metrics();
    println!("mean delay {:.2} s, {} control messages", m.mean_delay_s, m.control_messages);
    print!("{}", world.snapshot().lines().take(3).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
