/// Per-run outcome counters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metrics {
    pub delivered_bytes_total: u64,
    pub delivered_packets: u64,
    /// `(seconds, alive nodes)` sampled at t = 0 and every sample interval.
    pub alive_count_timeline: Vec<(f64, usize)>,
    /// Mean creation-to-sink time of delivered packets, seconds.
    pub mean_delay_s: f64,
    /// Dropped packets.
    pub drops: u64,
    pub dropped_bytes: u64,
    /// Probes and probe replies (RBA), advertisements and joins (LEACH).
    pub control_messages: u64,
    pub emitted_bytes: u64,
}

impl Metrics {
    /// Alive count of the last sample taken at or before `t_s`.
    pub fn alive_at(&self, t_s: f64) -> Option<usize> {
        self.alive_count_timeline.iter().rev().find(|(t, _)| *t <= t_s + 1e-9).map(|&(_, c)| c)
    }
}

/// Where every emitted byte currently is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ByteLedger {
    pub emitted: u64,
    pub delivered: u64,
    pub queued: u64,
    pub dropped: u64,
    /// Received during the current tick, not yet forwardable.
    pub in_flight: u64,
}

impl ByteLedger {
    pub fn is_balanced(&self) -> bool {
        self.emitted == self.delivered + self.queued + self.dropped + self.in_flight
    }
}
