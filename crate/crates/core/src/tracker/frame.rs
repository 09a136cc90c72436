use super::TrackError;

/// 8-bit single-channel image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayFrame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayFrame {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, TrackError> {
        if width == 0 || height == 0 {
            return Err(TrackError::EmptyFrame);
        }
        if data.len() != width * height {
            return Err(TrackError::FrameSize { expected: width * height, actual: data.len() });
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, TrackError> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    /// Encode as binary PGM (P5, maxval 255).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    /// Decode a binary PGM (P5) with maxval <= 255.
    pub fn from_pgm(bytes: &[u8]) -> Result<Self, TrackError> {
        let mut parser = PgmHeader { bytes, pos: 0 };
        if bytes.len() < 2 || &bytes[..2] != b"P5" {
            return Err(pgm_err(0, "missing P5 magic number"));
        }
        parser.pos = 2;
        let width = parser.number("width")?;
        let height = parser.number("height")?;
        let maxval = parser.number("maxval")?;
        if width == 0 || height == 0 {
            return Err(pgm_err(parser.pos, "zero image dimension"));
        }
        if maxval == 0 || maxval > 255 {
            return Err(pgm_err(parser.pos, &format!("unsupported maxval {maxval}, need 1..=255")));
        }
        // exactly one whitespace byte separates the header from the raster
        match bytes.get(parser.pos) {
            Some(b) if b.is_ascii_whitespace() => parser.pos += 1,
            _ => return Err(pgm_err(parser.pos, "expected whitespace before raster")),
        }
        let need = width * height;
        let raster = &bytes[parser.pos..];
        if raster.len() < need {
            return Err(pgm_err(bytes.len(), &format!("truncated raster: need {need} bytes, found {}", raster.len())));
        }
        let mut data = raster[..need].to_vec();
        if maxval != 255 {
            for px in &mut data {
                *px = ((*px as u32 * 255 + maxval as u32 / 2) / maxval as u32).min(255) as u8;
            }
        }
        Self::new(width, height, data)
    }
}

fn pgm_err(offset: usize, message: &str) -> TrackError {
    TrackError::Pgm { offset, message: message.to_string() }
}

struct PgmHeader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PgmHeader<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, TrackError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(pgm_err(start, &format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| pgm_err(start, &format!("{what} out of range")))
    }
}

/// Per-pixel target likelihood in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityFrame {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ProbabilityFrame {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self, TrackError> {
        if width == 0 || height == 0 {
            return Err(TrackError::EmptyFrame);
        }
        if values.len() != width * height {
            return Err(TrackError::FrameSize { expected: width * height, actual: values.len() });
        }
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(TrackError::Probability(*bad));
        }
        Ok(Self { width, height, values })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self, TrackError> {
        Self::new(width, height, vec![0.0; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Panics if `value` is outside `[0, 1]`.
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        assert!((0.0..=1.0).contains(&value), "probability {value} outside [0, 1]");
        self.values[y * self.width + x] = value;
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Quantize to 8 bits (`round(p * 255)`), used when shipping ROI bytes.
    pub fn to_gray(&self) -> GrayFrame {
        let data = self.values.iter().map(|p| (p * 255.0).round() as u8).collect();
        GrayFrame { width: self.width, height: self.height, data }
    }
}

/// Integer pixel rectangle. `x`, `y` is the top-left pixel and may lie
/// outside the frame before clipping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x: i64,
    pub y: i64,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub const fn new(x: i64, y: i64, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    /// Pixel-coordinate center; a pixel's own coordinate is its center.
    pub fn center(&self) -> (f64, f64) {
        (self.x as f64 + (self.w as f64 - 1.0) / 2.0, self.y as f64 + (self.h as f64 - 1.0) / 2.0)
    }

    /// Rectangle of the given size whose center is nearest to `(cx, cy)`.
    pub fn centered_at(cx: f64, cy: f64, w: usize, h: usize) -> Self {
        let x = (cx - (w as f64 - 1.0) / 2.0).round() as i64;
        let y = (cy - (h as f64 - 1.0) / 2.0).round() as i64;
        Self { x, y, w, h }
    }

    /// Intersection with a `width x height` frame as half-open pixel ranges
    /// `(x0, y0, x1, y1)`, or `None` when empty.
    pub fn clip(&self, width: usize, height: usize) -> Option<(usize, usize, usize, usize)> {
        let x0 = self.x.max(0);
        let y0 = self.y.max(0);
        let x1 = (self.x + self.w as i64).min(width as i64);
        let y1 = (self.y + self.h as i64).min(height as i64);
        if x0 >= x1 || y0 >= y1 {
            None
        } else {
            Some((x0 as usize, y0 as usize, x1 as usize, y1 as usize))
        }
    }

    /// Shrink to the frame if larger, then slide it fully inside.
    pub fn fit_inside(&self, width: usize, height: usize) -> Self {
        let w = self.w.clamp(1, width);
        let h = self.h.clamp(1, height);
        let x = self.x.clamp(0, (width - w) as i64);
        let y = self.y.clamp(0, (height - h) as i64);
        Self { x, y, w, h }
    }

    pub fn is_inside(&self, width: usize, height: usize) -> bool {
        self.x >= 0 && self.y >= 0 && self.x as usize + self.w <= width && self.y as usize + self.h <= height
    }

    /// Same center, each side scaled by `factor` (rounded up).
    pub fn scaled(&self, factor: f64) -> Self {
        let (cx, cy) = self.center();
        let w = (self.w as f64 * factor).ceil() as usize;
        let h = (self.h as f64 * factor).ceil() as usize;
        Self::centered_at(cx, cy, w.max(1), h.max(1))
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_round_trip() {
        let frame = GrayFrame::new(3, 2, vec![0, 10, 20, 30, 40, 255]).unwrap();
        let decoded = GrayFrame::from_pgm(&frame.to_pgm()).unwrap();
        assert_eq!(decoded, frame);
    }

    #[test]
    fn pgm_with_comments_and_maxval() {
        let mut bytes = b"P5 # comment\n2 1\n# another\n15\n".to_vec();
        bytes.extend_from_slice(&[0, 15]);
        let frame = GrayFrame::from_pgm(&bytes).unwrap();
        assert_eq!(frame.data(), &[0, 255]);
    }

    #[test]
    fn pgm_errors_carry_offsets() {
        match GrayFrame::from_pgm(b"P6\n1 1\n255\n\0") {
            Err(TrackError::Pgm { offset: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match GrayFrame::from_pgm(b"P5\n4 4\n255\n\0\0") {
            Err(TrackError::Pgm { offset, message }) => {
                assert_eq!(offset, 13);
                assert!(message.contains("truncated"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match GrayFrame::from_pgm(b"P5\nx 4\n255\n") {
            Err(TrackError::Pgm { offset: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn probability_bounds_enforced() {
        assert!(ProbabilityFrame::new(1, 1, vec![1.5]).is_err());
        assert!(ProbabilityFrame::new(2, 1, vec![0.5]).is_err());
        assert!(ProbabilityFrame::new(0, 1, vec![]).is_err());
    }

    #[test]
    fn rect_helpers() {
        let r = Rect::centered_at(10.0, 10.0, 5, 5);
        assert_eq!(r, Rect::new(8, 8, 5, 5));
        assert_eq!(r.center(), (10.0, 10.0));
        assert_eq!(Rect::new(-3, 2, 5, 5).clip(10, 10), Some((0, 2, 2, 7)));
        assert_eq!(Rect::new(20, 2, 5, 5).clip(10, 10), None);
        assert_eq!(Rect::new(8, -2, 5, 5).fit_inside(10, 10), Rect::new(5, 0, 5, 5));
        assert_eq!(Rect::new(0, 0, 50, 3).fit_inside(10, 10), Rect::new(0, 0, 10, 3));
    }
}
