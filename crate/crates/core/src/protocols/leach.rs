//! LEACH cluster-head rotation (baseline).

use rand::Rng;
use thiserror::Error;

use super::NodeId;
use crate::geometry::{distance_sq, Point};

pub const DEFAULT_HEAD_PROBABILITY: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LeachError {
    #[error("cluster-head probability must lie strictly between 0 and 1, got {0}")]
    Probability(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeachNode {
    pub position: Point,
    pub alive: bool,
    /// Round in which this node last served as cluster head.
    pub last_head_round: Option<u64>,
}

impl LeachNode {
    pub fn new(position: Point) -> Self {
        Self { position, alive: true, last_head_round: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClusterAssignment {
    pub heads: Vec<NodeId>,
    /// Head each node reports to; heads map to themselves. `None` for dead
    /// nodes and for everyone in a round without heads.
    pub head_of: Vec<Option<NodeId>>,
}

/// Rounds per epoch, `ceil(1 / p)`.
pub fn epoch_length(p: f64) -> u64 {
    (1.0 / p).ceil() as u64
}

/// `T(n) = p / (1 - p * (round mod ceil(1/p)))`, capped at 1.
pub fn election_threshold(p: f64, round: u64) -> f64 {
    let r = (round % epoch_length(p)) as f64;
    (p / (1.0 - p * r)).min(1.0)
}

fn eligible(node: &LeachNode, round: u64, epoch: u64) -> bool {
    node.alive && node.last_head_round.is_none_or(|last| last / epoch < round / epoch)
}

/// Elect cluster heads for `round` and attach every other live node to its
/// nearest head (ties to the lower id). Elected nodes have their
/// `last_head_round` updated. One uniform draw is taken per eligible node,
/// in id order.
pub fn leach_round<R: Rng + ?Sized>(
    nodes: &mut [LeachNode],
    round: u64,
    p: f64,
    rng: &mut R,
) -> Result<ClusterAssignment, LeachError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(LeachError::Probability(p));
    }
    let epoch = epoch_length(p);
    let threshold = election_threshold(p, round);
    let mut heads = Vec::new();
    for (id, node) in nodes.iter_mut().enumerate() {
        if eligible(node, round, epoch) && rng.gen::<f64>() < threshold {
            node.last_head_round = Some(round);
            heads.push(id);
        }
    }

    let mut head_of = vec![None; nodes.len()];
    if !heads.is_empty() {
        for (id, node) in nodes.iter().enumerate() {
            if !node.alive {
                continue;
            }
            head_of[id] = heads
                .iter()
                .map(|&h| (distance_sq(node.position, nodes[h].position), h))
                .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                .map(|(_, h)| h);
        }
    }
    Ok(ClusterAssignment { heads, head_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(n: usize) -> Vec<LeachNode> {
        (0..n).map(|i| LeachNode::new(Point::new(i as f64, 0.0))).collect()
    }

    #[test]
    fn threshold_formula() {
        assert_eq!(epoch_length(0.05), 20);
        assert_eq!(election_threshold(0.05, 0), 0.05);
        assert!((election_threshold(0.05, 10) - 0.1).abs() < 1e-12);
        assert!((election_threshold(0.05, 19) - 1.0).abs() < 1e-9);
        assert_eq!(election_threshold(0.05, 20), 0.05);
    }

    #[test]
    fn rejects_bad_probability() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(leach_round(&mut line(3), 0, 1.0, &mut rng), Err(LeachError::Probability(1.0)));
        assert!(leach_round(&mut line(3), 0, 0.0, &mut rng).is_err());
    }

    #[test]
    fn every_node_serves_once_per_epoch() {
        let mut nodes = line(40);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut served = vec![0; 40];
        for round in 0..20 {
            let a = leach_round(&mut nodes, round, 0.05, &mut rng).unwrap();
            for h in a.heads {
                served[h] += 1;
            }
        }
        assert!(served.iter().all(|&c| c == 1), "{served:?}");
    }

    #[test]
    fn members_join_nearest_head() {
        let mut nodes = line(10);
        nodes[0].last_head_round = Some(0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // last round of the epoch: every eligible node elects itself
        let a = leach_round(&mut nodes, 19, 0.05, &mut rng).unwrap();
        assert_eq!(a.heads, (1..10).collect::<Vec<_>>());
        assert_eq!(a.head_of[0], Some(1));
        assert_eq!(a.head_of[5], Some(5));
    }

    #[test]
    fn dead_nodes_are_skipped() {
        let mut nodes = line(5);
        for n in &mut nodes {
            n.alive = false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = leach_round(&mut nodes, 19, 0.05, &mut rng).unwrap();
        assert!(a.heads.is_empty());
        assert!(a.head_of.iter().all(Option::is_none));
    }
}
