use super::backproject::{back_project_region, Histogram, DEFAULT_BINS};
use super::frame::{GrayFrame, ProbabilityFrame, Rect};
use super::moments::window_moments;
use super::stream::HEADER_BYTES;
use super::TrackError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackConfig {
    /// Mean shift stops once the centroid moves less than this many pixels.
    pub threshold: f64,
    pub max_iter: usize,
    /// Lower clamp on the adapted window side.
    pub min_window: usize,
    pub bins: usize,
    /// The probability image is only evaluated in the search window grown
    /// by this factor.
    pub roi_margin: f64,
    /// Ship ROI pixels with each record; otherwise only the header.
    pub ship_roi: bool,
}

impl Default for TrackConfig {
    fn default() -> Self {
        Self { threshold: 1.0, max_iter: 20, min_window: 8, bins: DEFAULT_BINS, roi_margin: 1.2, ship_roi: true }
    }
}

impl TrackConfig {
    pub fn validate(&self) -> Result<(), TrackError> {
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(TrackError::Parameter(format!("threshold must be > 0, got {}", self.threshold)));
        }
        if self.max_iter == 0 {
            return Err(TrackError::Parameter("max_iter must be >= 1".into()));
        }
        if self.min_window == 0 {
            return Err(TrackError::Parameter("min_window must be >= 1".into()));
        }
        if !(2..=256).contains(&self.bins) {
            return Err(TrackError::BinCount(self.bins));
        }
        if !(self.roi_margin >= 1.0 && self.roi_margin.is_finite()) {
            return Err(TrackError::Parameter(format!("roi_margin must be >= 1, got {}", self.roi_margin)));
        }
        Ok(())
    }
}

/// Search window state after processing one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackWindow {
    pub rect: Rect,
    pub cx: f64,
    pub cy: f64,
    pub m00: f64,
    pub iterations: usize,
    pub lost: bool,
}

impl TrackWindow {
    pub fn from_rect(rect: Rect) -> Self {
        let (cx, cy) = rect.center();
        Self { rect, cx, cy, m00: 0.0, iterations: 0, lost: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackRecord {
    pub frame_index: usize,
    pub window: TrackWindow,
    pub payload_bytes: usize,
}

/// Mean shift mode seeking from `start`.
///
/// Each iteration computes the window moments and recenters the window on the
/// centroid; it stops when the centroid is less than `threshold` pixels from
/// the window center, or after `max_iter` iterations. The returned window is
/// centered on the last centroid. A start window with no mass comes back
/// unchanged with `lost` set and zero iterations.
pub fn mean_shift(
    frame: &ProbabilityFrame,
    start: Rect,
    threshold: f64,
    max_iter: usize,
) -> Result<TrackWindow, TrackError> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(TrackError::Parameter(format!("threshold must be > 0, got {threshold}")));
    }
    if max_iter == 0 {
        return Err(TrackError::Parameter("max_iter must be >= 1".into()));
    }
    let (width, height) = (frame.width(), frame.height());
    start.clip(width, height).ok_or(TrackError::EmptyIntersection)?;

    let mut rect = start.fit_inside(width, height);
    let mut result = TrackWindow::from_rect(rect);
    for iteration in 1..=max_iter {
        let m = window_moments(frame, rect)?;
        if m.m00 <= 0.0 {
            if iteration == 1 {
                return Ok(TrackWindow { lost: true, ..TrackWindow::from_rect(start) });
            }
            // stepped off the mass; keep the last window that had some
            break;
        }
        let (wx, wy) = rect.center();
        let shift = (m.cx - wx).hypot(m.cy - wy);
        let next = Rect::centered_at(m.cx, m.cy, rect.w, rect.h).fit_inside(width, height);
        result = TrackWindow { rect: next, cx: m.cx, cy: m.cy, m00: m.m00, iterations: iteration, lost: false };
        if shift < threshold || next == rect {
            break;
        }
        rect = next;
    }
    Ok(result)
}

/// Side of the next square search window for zeroth moment `m00`:
/// `ceil(2 * sqrt(m00))` clamped to `[min_window, max_side]`.
pub fn window_side(m00: f64, min_window: usize, max_side: usize) -> usize {
    let raw = (2.0 * m00.max(0.0).sqrt()).ceil() as usize;
    raw.max(min_window).min(max_side)
}

/// One CamShift step: mean shift from the previous window, then resize the
/// window from the zeroth moment and center it on the converged centroid.
/// A lost target keeps the previous window.
pub fn camshift_step(
    frame: &ProbabilityFrame,
    prev: &TrackWindow,
    config: &TrackConfig,
) -> Result<TrackWindow, TrackError> {
    let shifted = mean_shift(frame, prev.rect, config.threshold, config.max_iter)?;
    if shifted.lost {
        return Ok(TrackWindow { m00: 0.0, iterations: 0, lost: true, ..*prev });
    }
    let max_side = frame.width().min(frame.height());
    let side = window_side(shifted.m00, config.min_window, max_side);
    let rect = Rect::centered_at(shifted.cx, shifted.cy, side, side).fit_inside(frame.width(), frame.height());
    Ok(TrackWindow { rect, ..shifted })
}

pub fn payload_bytes(window: &TrackWindow, ship_roi: bool) -> usize {
    if ship_roi {
        HEADER_BYTES + window.rect.area()
    } else {
        HEADER_BYTES
    }
}

/// Frame-to-frame CamShift tracker. The window found in one frame seeds the
/// search in the next.
#[derive(Debug, Clone)]
pub struct Tracker {
    config: TrackConfig,
    window: TrackWindow,
    model: Option<Histogram>,
    frame_index: usize,
}

impl Tracker {
    pub fn new(init: Rect, config: TrackConfig) -> Result<Self, TrackError> {
        config.validate()?;
        Ok(Self { config, window: TrackWindow::from_rect(init), model: None, frame_index: 0 })
    }

    pub fn window(&self) -> &TrackWindow {
        &self.window
    }

    pub fn config(&self) -> &TrackConfig {
        &self.config
    }

    /// Track on a ready-made probability image.
    pub fn track_probability(&mut self, frame: &ProbabilityFrame) -> Result<TrackRecord, TrackError> {
        if self.frame_index == 0 && !self.window.rect.is_inside(frame.width(), frame.height()) {
            return Err(TrackError::InitWindow(self.window.rect));
        }
        self.window = camshift_step(frame, &self.window, &self.config)?;
        Ok(self.record())
    }

    /// Track on a grey frame. The target model is built from the initial
    /// window of the first frame; later frames are back-projected only in
    /// the margin-grown search region around the current window.
    pub fn track_gray(&mut self, frame: &GrayFrame) -> Result<TrackRecord, TrackError> {
        if self.model.is_none() {
            if !self.window.rect.is_inside(frame.width(), frame.height()) {
                return Err(TrackError::InitWindow(self.window.rect));
            }
            self.model = Some(Histogram::target_model(frame, self.window.rect, self.config.bins)?);
        }
        let model = self.model.as_ref().expect("model set above");
        let roi = self.window.rect.scaled(self.config.roi_margin);
        let probability = back_project_region(frame, model, roi)?;
        self.window = camshift_step(&probability, &self.window, &self.config)?;
        Ok(self.record())
    }

    fn record(&mut self) -> TrackRecord {
        let record = TrackRecord {
            frame_index: self.frame_index,
            window: self.window,
            payload_bytes: payload_bytes(&self.window, self.config.ship_roi),
        };
        self.frame_index += 1;
        record
    }
}

/// Track a sequence of probability images from `init`.
pub fn track_sequence(
    frames: &[ProbabilityFrame],
    init: Rect,
    config: &TrackConfig,
) -> Result<Vec<TrackRecord>, TrackError> {
    if frames.is_empty() {
        return Err(TrackError::NoFrames);
    }
    let mut tracker = Tracker::new(init, *config)?;
    frames.iter().map(|f| tracker.track_probability(f)).collect()
}

/// Track a sequence of grey frames from `init`.
pub fn track_gray_sequence(
    frames: &[GrayFrame],
    init: Rect,
    config: &TrackConfig,
) -> Result<Vec<TrackRecord>, TrackError> {
    if frames.is_empty() {
        return Err(TrackError::NoFrames);
    }
    let mut tracker = Tracker::new(init, *config)?;
    frames.iter().map(|f| tracker.track_gray(f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracker::synth::gaussian_frame;

    #[test]
    fn centered_blob_converges_in_one_iteration() {
        let frame = gaussian_frame(64, 64, 30.0, 30.0, 3.0).unwrap();
        let w = mean_shift(&frame, Rect::centered_at(30.0, 30.0, 15, 15), 1.0, 20).unwrap();
        assert_eq!(w.iterations, 1);
        assert!((w.cx - 30.0).abs() < 1e-9 && (w.cy - 30.0).abs() < 1e-9);
        assert!(!w.lost);
    }

    #[test]
    fn offset_start_climbs_to_blob() {
        let frame = gaussian_frame(64, 48, 30.0, 20.0, 3.0).unwrap();
        let start = Rect::centered_at(24.0, 20.0, 17, 17);
        let w = mean_shift(&frame, start, 1.0, 20).unwrap();
        assert!((w.cx - 30.0).hypot(w.cy - 20.0) <= 1.0, "{w:?}");
    }

    #[test]
    fn empty_frame_is_lost() {
        let frame = ProbabilityFrame::zeros(32, 32).unwrap();
        let start = Rect::new(4, 4, 10, 10);
        let w = mean_shift(&frame, start, 1.0, 20).unwrap();
        assert!(w.lost);
        assert_eq!(w.iterations, 0);
        assert_eq!(w.rect, start);
    }

    #[test]
    fn mean_shift_guards() {
        let frame = ProbabilityFrame::zeros(8, 8).unwrap();
        assert!(mean_shift(&frame, Rect::new(0, 0, 2, 2), 0.0, 5).is_err());
        assert!(mean_shift(&frame, Rect::new(0, 0, 2, 2), 1.0, 0).is_err());
        assert_eq!(mean_shift(&frame, Rect::new(50, 50, 2, 2), 1.0, 5), Err(TrackError::EmptyIntersection));
    }

    #[test]
    fn window_side_rule() {
        assert_eq!(window_side(100.0, 1, 1000), 20);
        assert_eq!(window_side(1.0, 8, 1000), 8);
        assert_eq!(window_side(1e6, 8, 64), 64);
    }

    #[test]
    fn lost_target_holds_window() {
        let frame = ProbabilityFrame::zeros(32, 32).unwrap();
        let prev =
            TrackWindow { rect: Rect::new(3, 4, 12, 12), cx: 9.0, cy: 10.0, m00: 20.0, iterations: 2, lost: false };
        let next = camshift_step(&frame, &prev, &TrackConfig::default()).unwrap();
        assert!(next.lost);
        assert_eq!(next.rect, prev.rect);
        assert_eq!((next.cx, next.cy), (9.0, 10.0));
        assert_eq!(next.m00, 0.0);
    }

    #[test]
    fn camshift_resizes_from_mass() {
        // uniform 10x10 square of ones: m00 = 100 -> side 20
        let mut frame = ProbabilityFrame::zeros(64, 64).unwrap();
        for y in 20..30 {
            for x in 20..30 {
                frame.set(x, y, 1.0);
            }
        }
        let prev = TrackWindow::from_rect(Rect::new(18, 18, 14, 14));
        let next = camshift_step(&frame, &prev, &TrackConfig::default()).unwrap();
        assert_eq!(next.m00, 100.0);
        assert_eq!((next.rect.w, next.rect.h), (20, 20));
        assert_eq!(next.rect.center(), (24.5, 24.5));
    }

    #[test]
    fn init_window_must_be_inside() {
        let frame = ProbabilityFrame::zeros(16, 16).unwrap();
        let mut t = Tracker::new(Rect::new(10, 10, 10, 10), TrackConfig::default()).unwrap();
        assert!(matches!(t.track_probability(&frame), Err(TrackError::InitWindow(_))));
    }

    #[test]
    fn metadata_only_payload() {
        let w = TrackWindow::from_rect(Rect::new(0, 0, 10, 12));
        assert_eq!(payload_bytes(&w, true), HEADER_BYTES + 120);
        assert_eq!(payload_bytes(&w, false), HEADER_BYTES);
    }
}
