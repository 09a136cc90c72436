use super::frame::{ProbabilityFrame, Rect};
use super::TrackError;

/// Zeroth moment and centroid of the probability mass inside a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub m00: f64,
    pub cx: f64,
    pub cy: f64,
}

/// Moments over `window` clipped to the frame. A window with no mass reports
/// its own (clipped) center as the centroid.
pub fn window_moments(frame: &ProbabilityFrame, window: Rect) -> Result<Moments, TrackError> {
    let (x0, y0, x1, y1) = window.clip(frame.width(), frame.height()).ok_or(TrackError::EmptyIntersection)?;
    let mut m00 = 0.0;
    let mut m10 = 0.0;
    let mut m01 = 0.0;
    let values = frame.values();
    for y in y0..y1 {
        let row = &values[y * frame.width()..(y + 1) * frame.width()];
        for (x, &p) in row.iter().enumerate().take(x1).skip(x0) {
            m00 += p;
            m10 += x as f64 * p;
            m01 += y as f64 * p;
        }
    }
    if m00 > 0.0 {
        Ok(Moments { m00, cx: m10 / m00, cy: m01 / m00 })
    } else {
        Ok(Moments { m00: 0.0, cx: (x0 + x1 - 1) as f64 / 2.0, cy: (y0 + y1 - 1) as f64 / 2.0 })
    }
}
