//! Greedy perimeter stateless routing (baseline).
//!
//! Greedy mode forwards to the neighbor closest to the destination. At a
//! local minimum the packet switches to perimeter mode and walks faces of the
//! Gabriel-planarized graph with the right-hand rule, changing face whenever
//! an edge crosses the segment from the perimeter entry point to the
//! destination closer than the last crossing. Greedy resumes at the first
//! node closer to the destination than the entry point.

use std::f64::consts::TAU;

use super::{NodeId, RoutingDecision, RoutingMode};
use crate::geometry::{distance, distance_sq, segment_intersection, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyOutcome {
    Forward(NodeId),
    LocalMinimum,
}

/// Neighbor strictly closer to `sink` than `sender`, nearest first (ties to
/// the lower id), or a local-minimum signal.
pub fn gpsr_greedy(sender: Point, sink: Point, neighbors: &[(NodeId, Point)]) -> GreedyOutcome {
    let own = distance_sq(sender, sink);
    neighbors
        .iter()
        .map(|&(id, p)| (distance_sq(p, sink), id))
        .filter(|&(d, _)| d < own)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map_or(GreedyOutcome::LocalMinimum, |(_, id)| GreedyOutcome::Forward(id))
}

/// Gabriel subgraph: edge `u-v` survives unless some neighbor of `u` or `v`
/// lies strictly inside the circle with diameter `uv`.
pub fn gabriel_planarize(positions: &[Point], adjacency: &[Vec<NodeId>]) -> Vec<Vec<NodeId>> {
    let mut planar = vec![Vec::new(); positions.len()];
    for (u, nbrs) in adjacency.iter().enumerate() {
        for &v in nbrs {
            if v <= u {
                continue;
            }
            let m = positions[u].midpoint(positions[v]);
            let r2 = distance_sq(positions[u], positions[v]) / 4.0;
            let witness = adjacency[u]
                .iter()
                .chain(&adjacency[v])
                .any(|&w| w != u && w != v && distance_sq(positions[w], m) < r2);
            if !witness {
                planar[u].push(v);
                planar[v].push(u);
            }
        }
    }
    for list in &mut planar {
        list.sort_unstable();
    }
    planar
}

/// Connectivity and planar subgraph for one snapshot of the network.
#[derive(Debug, Clone)]
pub struct GpsrGraph {
    positions: Vec<Point>,
    neighbors: Vec<Vec<NodeId>>,
    planar: Vec<Vec<NodeId>>,
}

impl GpsrGraph {
    pub fn new(positions: Vec<Point>, neighbors: Vec<Vec<NodeId>>) -> Self {
        let planar = gabriel_planarize(&positions, &neighbors);
        Self { positions, neighbors, planar }
    }

    pub fn position(&self, id: NodeId) -> Point {
        self.positions[id]
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.neighbors[id]
    }

    pub fn planar_neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.planar[id]
    }

    pub fn planar_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.planar.iter().enumerate().flat_map(|(u, vs)| vs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    fn neighbor_points(&self, id: NodeId) -> Vec<(NodeId, Point)> {
        self.neighbors[id].iter().map(|&v| (v, self.positions[v])).collect()
    }
}

/// Bookkeeping a packet carries while in perimeter mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterState {
    /// Where the packet entered perimeter mode.
    pub entry: Point,
    /// Closest crossing so far of the entry-to-destination segment.
    pub face_point: Point,
    /// First edge traversed on the current face.
    pub first_edge: (NodeId, NodeId),
}

/// First planar neighbor counterclockwise from `reference` (a bearing in
/// radians) around `at`. A neighbor exactly on the reference bearing comes
/// last, after a full turn.
fn next_ccw(graph: &GpsrGraph, at: NodeId, reference: f64) -> Option<NodeId> {
    let origin = graph.position(at);
    graph
        .planar_neighbors(at)
        .iter()
        .map(|&v| {
            let mut delta = (graph.position(v).bearing_from(origin) - reference).rem_euclid(TAU);
            if delta <= 0.0 {
                delta = TAU;
            }
            (delta, v)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, v)| v)
}

/// One perimeter-mode hop from `current`.
///
/// `prev` is the node the packet arrived from; `None` means the packet is
/// entering perimeter mode here, in which case `state` is reset. Returns a
/// drop when the packet would start the same face edge again, which means
/// the face was walked end to end without getting closer.
pub fn gpsr_perimeter(
    graph: &GpsrGraph,
    current: NodeId,
    prev: Option<NodeId>,
    sink: Point,
    state: &mut PerimeterState,
) -> RoutingDecision {
    let here = graph.position(current);
    let entering = prev.is_none();
    let reference = match prev {
        Some(p) => graph.position(p).bearing_from(here),
        None => sink.bearing_from(here),
    };
    let Some(mut next) = next_ccw(graph, current, reference) else {
        return RoutingDecision::drop();
    };
    if entering {
        *state = PerimeterState { entry: here, face_point: here, first_edge: (current, next) };
    } else if (current, next) == state.first_edge {
        return RoutingDecision::drop();
    }

    // face changes; each one strictly shrinks the distance to the sink, so
    // the loop is bounded by the node degree
    for _ in 0..graph.planar_neighbors(current).len() {
        let Some(cross) = segment_intersection(here, graph.position(next), state.entry, sink) else {
            break;
        };
        let closer = distance(cross, sink) < distance(state.face_point, sink) * (1.0 - 1e-12);
        if !closer {
            break;
        }
        state.face_point = cross;
        let bearing = graph.position(next).bearing_from(here);
        match next_ccw(graph, current, bearing) {
            Some(v) => next = v,
            None => break,
        }
        state.first_edge = (current, next);
    }
    RoutingDecision::forward(next, RoutingMode::Perimeter)
}

/// Full GPSR forwarding decision at `current` toward the node `dest`.
pub fn gpsr_route(
    graph: &GpsrGraph,
    current: NodeId,
    prev: Option<NodeId>,
    dest: NodeId,
    perimeter: &mut Option<PerimeterState>,
) -> RoutingDecision {
    let here = graph.position(current);
    let sink = graph.position(dest);
    if let Some(state) = perimeter {
        if distance_sq(here, sink) < distance_sq(state.entry, sink) {
            *perimeter = None;
        }
    }
    match perimeter {
        None => match gpsr_greedy(here, sink, &graph.neighbor_points(current)) {
            GreedyOutcome::Forward(v) => RoutingDecision::forward(v, RoutingMode::Greedy),
            GreedyOutcome::LocalMinimum => {
                let mut state = PerimeterState { entry: here, face_point: here, first_edge: (current, current) };
                let decision = gpsr_perimeter(graph, current, None, sink, &mut state);
                if !decision.is_drop() {
                    *perimeter = Some(state);
                }
                decision
            }
        },
        Some(state) => gpsr_perimeter(graph, current, prev, sink, state),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RouteOutcome {
    Delivered { path: Vec<NodeId>, perimeter_hops: usize },
    Dropped { path: Vec<NodeId> },
}

impl RouteOutcome {
    pub fn delivered(&self) -> bool {
        matches!(self, RouteOutcome::Delivered { .. })
    }

    pub fn path(&self) -> &[NodeId] {
        match self {
            RouteOutcome::Delivered { path, .. } | RouteOutcome::Dropped { path } => path,
        }
    }
}

/// Route a packet from `src` to `dest` hop by hop, giving up after
/// `max_hops`.
pub fn route_packet(graph: &GpsrGraph, src: NodeId, dest: NodeId, max_hops: usize) -> RouteOutcome {
    let mut path = vec![src];
    let mut perimeter = None;
    let mut perimeter_hops = 0;
    let mut prev = None;
    let mut current = src;
    while current != dest {
        if path.len() > max_hops {
            return RouteOutcome::Dropped { path };
        }
        let decision = gpsr_route(graph, current, prev, dest, &mut perimeter);
        let Some(next) = decision.next_hop() else {
            return RouteOutcome::Dropped { path };
        };
        if decision.mode() == RoutingMode::Perimeter {
            perimeter_hops += 1;
        }
        prev = Some(current);
        current = next;
        path.push(next);
    }
    RouteOutcome::Delivered { path, perimeter_hops }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_from_edges(points: &[(f64, f64)], edges: &[(usize, usize)]) -> GpsrGraph {
        let positions: Vec<Point> = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let mut adj = vec![Vec::new(); positions.len()];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        GpsrGraph::new(positions, adj)
    }

    #[test]
    fn greedy_examples() {
        let s = Point::new(0.0, 0.0);
        let sink = Point::new(10.0, 0.0);
        let nbrs = [(1, Point::new(3.0, 0.0)), (2, Point::new(2.0, 2.0))];
        assert_eq!(gpsr_greedy(s, sink, &nbrs), GreedyOutcome::Forward(1));
        let behind = [(1, Point::new(-3.0, 0.0)), (2, Point::new(0.0, 12.0))];
        assert_eq!(gpsr_greedy(s, sink, &behind), GreedyOutcome::LocalMinimum);
        let at_sink = [(7, sink), (1, Point::new(3.0, 0.0))];
        assert_eq!(gpsr_greedy(s, sink, &at_sink), GreedyOutcome::Forward(7));
    }

    #[test]
    fn gabriel_removes_edge_with_witness() {
        // w sits at the midpoint of u-v
        let g = graph_from_edges(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.1)], &[(0, 1), (0, 2), (1, 2)]);
        assert!(!g.planar_neighbors(0).contains(&1));
        assert!(g.planar_neighbors(0).contains(&2));
        assert!(g.planar_neighbors(1).contains(&2));
    }

    #[test]
    fn perimeter_walks_around_void() {
        // 0 is a local minimum: its only neighbors are off to the side, and
        // the direct line to the sink (7) is blocked.
        //
        //        2 --- 3 --- 4
        //        |           |
        //        1           5
        //        |           |
        //        0           6 --- 7(sink)
        let g = graph_from_edges(
            &[(0.0, 0.0), (0.0, 5.0), (0.0, 10.0), (5.0, 10.0), (10.0, 10.0), (10.0, 5.0), (10.0, 0.0), (15.0, 0.0)],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)],
        );
        let out = route_packet(&g, 0, 7, 100);
        assert!(out.delivered(), "{out:?}");
        assert_eq!(out.path(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn partitioned_graph_drops() {
        let g = graph_from_edges(&[(0.0, 0.0), (0.0, 5.0), (5.0, 5.0), (20.0, 0.0)], &[(0, 1), (1, 2), (0, 2)]);
        let out = route_packet(&g, 0, 3, 100);
        assert!(!out.delivered());
        assert!(out.path().len() < 10, "face exhaustion should stop the walk early");
    }

    #[test]
    fn no_void_means_no_perimeter() {
        let g = graph_from_edges(&[(0.0, 0.0), (5.0, 0.0), (10.0, 0.0)], &[(0, 1), (1, 2)]);
        match route_packet(&g, 0, 2, 10) {
            RouteOutcome::Delivered { perimeter_hops, .. } => assert_eq!(perimeter_hops, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn isolated_node_drops() {
        let g = graph_from_edges(&[(0.0, 0.0), (9.0, 9.0)], &[]);
        assert!(!route_packet(&g, 0, 1, 10).delivered());
    }
}
