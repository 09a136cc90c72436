use std::cmp::Ordering;

use super::{NodeId, RoutingDecision, RoutingMode};
use crate::geometry::{distance_sq, in_forward_region, GeometryError, Point};

/// A probe response: a neighbor's position and its predicted RBA for the
/// next tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub id: NodeId,
    pub position: Point,
    pub predicted_rba: f64,
}

/// Bandwidth-balancing next hop.
///
/// Among neighbors in the forward region, pick the highest predicted RBA;
/// ties go to the neighbor nearer the sink, then to the lower id. With no
/// neighbor in the region, fall back to greedy progress over all neighbors,
/// and drop when none is closer to the sink than the sender.
pub fn rba_select(sender: Point, sink: Point, neighbors: &[Neighbor]) -> Result<RoutingDecision, GeometryError> {
    let mut best: Option<(&Neighbor, f64)> = None;
    for n in neighbors {
        if !in_forward_region(n.position, sender, sink)? {
            continue;
        }
        debug_assert!(n.predicted_rba >= 0.0, "negative predicted RBA");
        let d = distance_sq(n.position, sink);
        let better = match best {
            None => true,
            Some((b, bd)) => match n.predicted_rba.total_cmp(&b.predicted_rba) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => d < bd || (d == bd && n.id < b.id),
            },
        };
        if better {
            best = Some((n, d));
        }
    }
    if let Some((n, _)) = best {
        return Ok(RoutingDecision::forward(n.id, RoutingMode::Rba));
    }

    let own = distance_sq(sender, sink);
    let fallback = neighbors
        .iter()
        .map(|n| (distance_sq(n.position, sink), n.id))
        .filter(|&(d, _)| d < own)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(match fallback {
        Some((_, id)) => RoutingDecision::forward(id, RoutingMode::Greedy),
        None => RoutingDecision::drop(),
    })
}
