// Route around a void with GPSR: greedy until stuck, then the right-hand
// rule on the Gabriel graph.

use std::error::Error;

use wmsn::geometry::Point;
use wmsn::protocols::{route_packet, GpsrGraph, RouteOutcome};
use wmsn::sim::Topology;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // an arch of nodes over an empty pocket: the source at the bottom left
    // has no neighbor closer to the sink at the bottom right
    let positions: Vec<Point> =
        [(0.0, 0.0), (0.0, 20.0), (0.0, 40.0), (20.0, 50.0), (40.0, 50.0), (60.0, 40.0), (60.0, 20.0)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect();
    let src = 0;
    let topology = Topology::from_positions(positions, Point::new(60.0, 0.0), 25.0);

    let mut all = topology.positions().to_vec();
    all.push(topology.sink());
    let graph = GpsrGraph::new(all, topology.adjacency().to_vec());
    println!("{} nodes, {} planar edges", topology.node_count(), graph.planar_edges().count());

    match route_packet(&graph, src, topology.sink_id(), 64) {
        RouteOutcome::Delivered { path, perimeter_hops } => {
            println!("delivered in {} hops ({perimeter_hops} in perimeter mode): {path:?}", path.len() - 1)
        }
        RouteOutcome::Dropped { path } => println!("dropped after {path:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
