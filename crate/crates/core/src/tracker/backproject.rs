use super::frame::{GrayFrame, ProbabilityFrame, Rect};
use super::TrackError;

pub const DEFAULT_BINS: usize = 16;

/// Intensity histogram over `bin_count` equal-width bins of `0..=255`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    bins: Vec<f64>,
}

impl Histogram {
    pub fn from_bins(bins: Vec<f64>) -> Result<Self, TrackError> {
        if bins.len() < 2 || bins.len() > 256 {
            return Err(TrackError::BinCount(bins.len()));
        }
        if let Some(bad) = bins.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
            return Err(TrackError::NegativeBin(*bad));
        }
        Ok(Self { bins })
    }

    /// Counts of the pixels of `region` (clipped to the frame).
    pub fn from_region(frame: &GrayFrame, region: Rect, bin_count: usize) -> Result<Self, TrackError> {
        let mut hist = Self::from_bins(vec![0.0; bin_count])?;
        let (x0, y0, x1, y1) = region.clip(frame.width(), frame.height()).ok_or(TrackError::EmptyIntersection)?;
        for y in y0..y1 {
            for x in x0..x1 {
                let b = hist.bin_of(frame.get(x, y));
                hist.bins[b] += 1.0;
            }
        }
        Ok(hist)
    }

    /// Ratio histogram `min(model / image, 1)` per bin: how much of each
    /// intensity's occurrences in the whole image fall inside the target
    /// region. Suppresses intensities shared with the background.
    pub fn ratio(model: &Histogram, image: &Histogram) -> Result<Self, TrackError> {
        if model.bins.len() != image.bins.len() {
            return Err(TrackError::BinCount(image.bins.len()));
        }
        let bins =
            model.bins.iter().zip(&image.bins).map(|(&m, &i)| if i > 0.0 { (m / i).min(1.0) } else { 0.0 }).collect();
        Self::from_bins(bins)
    }

    /// Target model for a grey frame: ratio of the region's histogram to
    /// the whole frame's.
    pub fn target_model(frame: &GrayFrame, region: Rect, bin_count: usize) -> Result<Self, TrackError> {
        let model = Self::from_region(frame, region, bin_count)?;
        let whole = Rect::new(0, 0, frame.width(), frame.height());
        let image = Self::from_region(frame, whole, bin_count)?;
        Self::ratio(&model, &image)
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    pub fn bin_of(&self, intensity: u8) -> usize {
        intensity as usize * self.bins.len() / 256
    }

    pub fn max(&self) -> f64 {
        self.bins.iter().copied().fold(0.0, f64::max)
    }
}

/// `P(x, y) = H[bin(I(x, y))] / max(H)`.
pub fn back_project(frame: &GrayFrame, target: &Histogram) -> Result<ProbabilityFrame, TrackError> {
    let whole = Rect::new(0, 0, frame.width(), frame.height());
    back_project_region(frame, target, whole)
}

/// Back-projection restricted to `region`; pixels outside it are 0.
pub fn back_project_region(
    frame: &GrayFrame,
    target: &Histogram,
    region: Rect,
) -> Result<ProbabilityFrame, TrackError> {
    let max = target.max();
    if max <= 0.0 {
        return Err(TrackError::DegenerateHistogram);
    }
    let lut: Vec<f64> = (0..=255u8).map(|i| target.bins[target.bin_of(i)] / max).collect();
    let mut values = vec![0.0; frame.width() * frame.height()];
    if let Some((x0, y0, x1, y1)) = region.clip(frame.width(), frame.height()) {
        for y in y0..y1 {
            let row = y * frame.width();
            for x in x0..x1 {
                values[row + x] = lut[frame.data()[row + x] as usize];
            }
        }
    }
    ProbabilityFrame::new(frame.width(), frame.height(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_image_in_max_bin_is_all_ones() {
        let frame = GrayFrame::filled(6, 4, 200).unwrap();
        let mut bins = vec![0.0; 16];
        bins[200 * 16 / 256] = 9.0;
        let p = back_project(&frame, &Histogram::from_bins(bins).unwrap()).unwrap();
        assert!(p.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn absent_intensities_score_zero() {
        let frame = GrayFrame::filled(5, 5, 3).unwrap();
        let mut bins = vec![0.0; 16];
        bins[15] = 1.0;
        let p = back_project(&frame, &Histogram::from_bins(bins).unwrap()).unwrap();
        assert!(p.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_bin_ratio_lookup() {
        let data: Vec<u8> = (0..8).map(|i| if i % 2 == 0 { 10 } else { 240 }).collect();
        let frame = GrayFrame::new(8, 1, data).unwrap();
        let hist = Histogram::from_bins(vec![3.0, 1.0]).unwrap();
        let p = back_project(&frame, &hist).unwrap();
        for (i, v) in p.values().iter().enumerate() {
            let expected = if i % 2 == 0 { 1.0 } else { 1.0 / 3.0 };
            assert_eq!(*v, expected);
        }
    }

    #[test]
    fn zero_histogram_is_degenerate() {
        let frame = GrayFrame::filled(2, 2, 0).unwrap();
        let hist = Histogram::from_bins(vec![0.0; 4]).unwrap();
        assert_eq!(back_project(&frame, &hist), Err(TrackError::DegenerateHistogram));
    }

    #[test]
    fn histogram_guards() {
        assert!(Histogram::from_bins(vec![1.0]).is_err());
        assert!(Histogram::from_bins(vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn ratio_model_suppresses_background() {
        // bright 2x2 target in a dark 8x8 frame
        let mut frame = GrayFrame::filled(8, 8, 5).unwrap();
        for y in 3..5 {
            for x in 3..5 {
                frame.set(x, y, 250);
            }
        }
        let hist = Histogram::target_model(&frame, Rect::new(2, 2, 4, 4), 16).unwrap();
        let p = back_project(&frame, &hist).unwrap();
        assert_eq!(p.get(3, 3), 1.0);
        // 12 of the 60 dark pixels are inside the region
        assert!((p.get(0, 0) - 12.0 / 60.0).abs() < 1e-12);
    }

    #[test]
    fn region_restriction_zeroes_outside() {
        let frame = GrayFrame::filled(4, 4, 0).unwrap();
        let hist = Histogram::from_bins(vec![1.0, 0.0]).unwrap();
        let p = back_project_region(&frame, &hist, Rect::new(1, 1, 2, 2)).unwrap();
        assert_eq!(p.total_mass(), 4.0);
        assert_eq!(p.get(0, 0), 0.0);
        assert_eq!(p.get(2, 2), 1.0);
    }
}
