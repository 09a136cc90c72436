// Which neighbors of a sender lie in its forward region toward the sink.

use std::error::Error;

use wmsn::geometry::{in_forward_region, Point};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let sender = Point::new(50.0, 50.0);
    let sink = Point::new(50.0, 0.0);
    let candidates = [
        Point::new(50.0, 30.0),
        Point::new(80.0, 50.0),
        Point::new(20.0, 49.0),
        Point::new(50.0, 70.0),
        Point::new(65.0, 60.0),
    ];
    for c in candidates {
        let inside = in_forward_region(c, sender, sink)?;
        println!("{c} {}", if inside { "forward" } else { "behind" });
    }
    // sender on the sink has no direction
    assert!(in_forward_region(candidates[0], sink, sink).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
