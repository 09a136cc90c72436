//! Synthetic moving-blob video used by tests, examples and the traffic model.

use super::frame::{GrayFrame, ProbabilityFrame, Rect};
use super::TrackError;

/// Gaussian blob `exp(-r^2 / (2 sigma^2))` with peak 1 at `(cx, cy)`.
pub fn gaussian_frame(
    width: usize,
    height: usize,
    cx: f64,
    cy: f64,
    sigma: f64,
) -> Result<ProbabilityFrame, TrackError> {
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut values = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let dx = x as f64 - cx;
            let dy = y as f64 - cy;
            values.push((-(dx * dx + dy * dy) * inv).exp());
        }
    }
    ProbabilityFrame::new(width, height, values)
}

/// A single Gaussian blob moving at constant velocity, optionally growing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobSequence {
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    pub start: (f64, f64),
    /// Pixels per frame.
    pub velocity: (f64, f64),
    pub sigma: f64,
    /// Added to sigma every frame.
    pub growth: f64,
    pub background: u8,
    pub peak: u8,
}

impl Default for BlobSequence {
    fn default() -> Self {
        Self {
            width: 128,
            height: 128,
            frames: 100,
            start: (14.0, 64.0),
            velocity: (1.0, 0.0),
            sigma: 3.0,
            growth: 0.0,
            background: 16,
            peak: 240,
        }
    }
}

impl BlobSequence {
    pub fn validate(&self) -> Result<(), TrackError> {
        if self.width == 0 || self.height == 0 {
            return Err(TrackError::EmptyFrame);
        }
        if self.frames == 0 {
            return Err(TrackError::NoFrames);
        }
        if self.sigma.is_nan() || self.sigma <= 0.0 || self.sigma + self.growth * self.frames as f64 <= 0.0 {
            return Err(TrackError::Parameter(format!("blob sigma must stay > 0, got {}", self.sigma)));
        }
        if self.peak <= self.background {
            return Err(TrackError::Parameter("blob peak must be brighter than the background".into()));
        }
        Ok(())
    }

    /// Blob center in frame `k`. The path reflects off a `3 sigma` margin
    /// inside the frame so long sequences stay in view.
    pub fn center(&self, k: usize) -> (f64, f64) {
        let margin = 3.0 * self.sigma;
        let x = reflect(self.start.0 + self.velocity.0 * k as f64, margin, self.width as f64 - 1.0 - margin);
        let y = reflect(self.start.1 + self.velocity.1 * k as f64, margin, self.height as f64 - 1.0 - margin);
        (x, y)
    }

    pub fn sigma_at(&self, k: usize) -> f64 {
        self.sigma + self.growth * k as f64
    }

    pub fn probability_frame(&self, k: usize) -> Result<ProbabilityFrame, TrackError> {
        let (cx, cy) = self.center(k);
        gaussian_frame(self.width, self.height, cx, cy, self.sigma_at(k))
    }

    pub fn gray_frame(&self, k: usize) -> Result<GrayFrame, TrackError> {
        let p = self.probability_frame(k)?;
        let span = (self.peak - self.background) as f64;
        let data = p.values().iter().map(|v| (self.background as f64 + span * v).round() as u8).collect();
        GrayFrame::new(self.width, self.height, data)
    }

    pub fn probability_frames(&self) -> Result<Vec<ProbabilityFrame>, TrackError> {
        (0..self.frames).map(|k| self.probability_frame(k)).collect()
    }

    pub fn gray_frames(&self) -> Result<Vec<GrayFrame>, TrackError> {
        (0..self.frames).map(|k| self.gray_frame(k)).collect()
    }

    /// Square window of side `6 sigma + 1` around the first blob position.
    pub fn initial_window(&self) -> Rect {
        let side = (6.0 * self.sigma).ceil() as usize + 1;
        let (cx, cy) = self.center(0);
        Rect::centered_at(cx, cy, side, side).fit_inside(self.width, self.height)
    }
}

fn reflect(p: f64, lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    if span <= 0.0 {
        return (lo + hi) / 2.0;
    }
    let u = (p - lo).rem_euclid(2.0 * span);
    if u <= span {
        lo + u
    } else {
        lo + 2.0 * span - u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_reflects_inside_margin() {
        let seq = BlobSequence { velocity: (2.0, 0.0), ..Default::default() };
        // margin 9, right limit 118
        assert_eq!(seq.center(0), (14.0, 64.0));
        assert_eq!(seq.center(52), (118.0, 64.0));
        assert_eq!(seq.center(53), (116.0, 64.0));
        assert_eq!(seq.center(99), (24.0, 64.0));
    }

    #[test]
    fn blob_peak_and_symmetry() {
        let f = gaussian_frame(21, 21, 10.0, 10.0, 2.0).unwrap();
        assert_eq!(f.get(10, 10), 1.0);
        assert_eq!(f.get(8, 10), f.get(12, 10));
        assert!((f.total_mass() - 2.0 * std::f64::consts::PI * 4.0).abs() < 1e-3);
    }

    #[test]
    fn gray_frames_span_background_to_peak() {
        let seq = BlobSequence { frames: 2, ..Default::default() };
        let g = seq.gray_frame(1).unwrap();
        assert_eq!(g.get(15, 64), 240);
        assert_eq!(g.get(100, 10), 16);
    }
}
