// A small trial matrix from a config text, written as CSV.

use std::error::Error;

use wmsn::config::ExperimentConfig;
use wmsn::sim::{alive_csv, delivered_csv, run_experiment};

const CONFIG: &str = "
experiment.protocols = rba, leach, gpsr
experiment.node_counts = 40:80:40
experiment.trials = 2
experiment.duration_s = 20
topology.area_width = 100
topology.area_height = 100
node.capacity = 0.005
traffic.frames_per_tick = 3
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = ExperimentConfig::parse(CONFIG)?;
    let spec = config.experiment_spec()?;
    let results = run_experiment(&spec, 1)?;
    print!("{}", delivered_csv(&results));
    print!("{}", alive_csv(&results, 40).lines().take(6).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
