use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{distance_sq, Point};
use crate::protocols::NodeId;

/// Edge of the deployment area that hosts the sink at its midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SinkEdge {
    #[default]
    Bottom,
    Top,
    Left,
    Right,
}

impl SinkEdge {
    pub fn as_str(self) -> &'static str {
        match self {
            SinkEdge::Bottom => "bottom",
            SinkEdge::Top => "top",
            SinkEdge::Left => "left",
            SinkEdge::Right => "right",
        }
    }

    pub fn midpoint(self, width: f64, height: f64) -> Point {
        match self {
            SinkEdge::Bottom => Point::new(width / 2.0, 0.0),
            SinkEdge::Top => Point::new(width / 2.0, height),
            SinkEdge::Left => Point::new(0.0, height / 2.0),
            SinkEdge::Right => Point::new(width, height / 2.0),
        }
    }
}

impl fmt::Display for SinkEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SinkEdge {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "bottom" => Ok(SinkEdge::Bottom),
            "top" => Ok(SinkEdge::Top),
            "left" => Ok(SinkEdge::Left),
            "right" => Ok(SinkEdge::Right),
            other => Err(format!("unknown sink edge {other:?}")),
        }
    }
}

/// Static node placement plus the unit-disk graph over nodes and sink.
///
/// Node ids run `0..n`; the sink takes id `n` in adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    positions: Vec<Point>,
    sink: Point,
    radio_range: f64,
    neighbors: Vec<Vec<NodeId>>,
}

impl Topology {
    /// Unit-disk graph over explicit positions.
    pub fn from_positions(positions: Vec<Point>, sink: Point, radio_range: f64) -> Self {
        let n = positions.len();
        let r2 = radio_range * radio_range;
        let mut neighbors = vec![Vec::new(); n + 1];
        for i in 0..n {
            for j in i + 1..n {
                if distance_sq(positions[i], positions[j]) <= r2 {
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
            if distance_sq(positions[i], sink) <= r2 {
                neighbors[i].push(n);
                neighbors[n].push(i);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self { positions, sink, radio_range, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn sink_id(&self) -> NodeId {
        self.positions.len()
    }

    pub fn sink(&self) -> Point {
        self.sink
    }

    pub fn radio_range(&self) -> f64 {
        self.radio_range
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    /// Position of a node or of the sink.
    pub fn position(&self, id: NodeId) -> Point {
        if id == self.sink_id() {
            self.sink
        } else {
            self.positions[id]
        }
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.neighbors[id]
    }

    pub fn adjacency(&self) -> &[Vec<NodeId>] {
        &self.neighbors
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Connected-component label per vertex (nodes and sink), labels in
    /// order of first discovery.
    pub fn components(&self) -> Vec<usize> {
        let total = self.neighbors.len();
        let mut label = vec![usize::MAX; total];
        let mut next = 0;
        for start in 0..total {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.neighbors[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Fraction of sensor nodes (sink excluded) in the largest component.
    pub fn giant_component_fraction(&self) -> f64 {
        let n = self.node_count();
        if n == 0 {
            return 0.0;
        }
        let labels = self.components();
        let mut sizes = vec![0usize; labels.iter().max().map_or(0, |m| m + 1)];
        for &l in &labels[..n] {
            sizes[l] += 1;
        }
        *sizes.iter().max().unwrap_or(&0) as f64 / n as f64
    }
}

/// `n` nodes uniform in `width x height`, sink at the midpoint of
/// `sink_edge`, unit-disk links of length `<= radio_range`.
pub fn build_topology(n: usize, width: f64, height: f64, radio_range: f64, sink_edge: SinkEdge, seed: u64) -> Topology {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions = (0..n).map(|_| Point::new(rng.gen::<f64>() * width, rng.gen::<f64>() * height)).collect();
    Topology::from_positions(positions, sink_edge.midpoint(width, height), radio_range)
}
