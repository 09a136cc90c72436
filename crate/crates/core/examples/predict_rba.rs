// Replay three RBA histories through the predictor and pick the neighbor
// with the highest potential RBA.

use std::error::Error;

use wmsn::geometry::Point;
use wmsn::predictor::{replay, steps_to_csv, PredictorParams, PredictorState};
use wmsn::protocols::{rba_select, Neighbor};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = PredictorParams::new(1.0, 1.0)?;
    let histories =
        [("b", 1, [85.0, 70.0, 55.0, 40.0]), ("e", 2, [25.0, 32.0, 35.0, 39.0]), ("f", 3, [50.0, 46.0, 42.0, 38.0])];

    // a sits at the origin, the sink straight ahead
    let a = Point::new(0.0, 0.0);
    let sink = Point::new(100.0, 0.0);
    let positions = [Point::new(10.0, 0.0), Point::new(8.0, 6.0), Point::new(8.0, -6.0)];

    let mut neighbors = Vec::new();
    for ((name, id, history), position) in histories.iter().zip(positions) {
        let steps = replay(history, &params, PredictorState::default())?;
        let predicted = steps.last().map_or(0.0, |s| s.prediction);
        println!("node {name}: potential RBA {predicted:.5}");
        print!("{}", steps_to_csv(&steps));
        neighbors.push(Neighbor { id: *id, position, predicted_rba: predicted });
    }

    let decision = rba_select(a, sink, &neighbors)?;
    let chosen = decision.next_hop().ok_or("no next hop")?;
    let name = histories.iter().find(|h| h.1 == chosen).map_or("?", |h| h.0);
    println!("a forwards to {name} ({})", decision.mode().as_str());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
