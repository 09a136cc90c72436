// LEACH cluster-head rotation over one epoch.

use std::error::Error;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wmsn::protocols::{epoch_length, leach_round, LeachNode, DEFAULT_HEAD_PROBABILITY};
use wmsn::sim::{build_topology, SinkEdge};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let topology = build_topology(100, 100.0, 100.0, 30.0, SinkEdge::Bottom, 4);
    let mut nodes: Vec<LeachNode> = topology.positions().iter().map(|&p| LeachNode::new(p)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = DEFAULT_HEAD_PROBABILITY;

    let mut served = vec![0u32; nodes.len()];
    for round in 0..epoch_length(p) {
        let assignment = leach_round(&mut nodes, round, p, &mut rng)?;
        for &h in &assignment.heads {
            served[h] += 1;
        }
        println!("round {round:2}: {} heads", assignment.heads.len());
    }
    println!("every node served exactly once: {}", served.iter().all(|&s| s == 1));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
