//! Track log CSV and the ROI-cropped compressed stream.
//!
//! Stream layout, per frame, all integers little-endian:
//!
//! ```text
//! offset  size  field
//!      0     4  frame index (u32)
//!      4     2  window center x = x0 + w / 2 (u16)
//!      6     2  window center y = y0 + h / 2 (u16)
//!      8     2  window width w (u16)
//!     10     2  window height h (u16)
//!     12     1  flags: bit 0 lost, bit 1 ROI pixels follow
//!     13     3  reserved, zero
//!     16   w*h  ROI pixels, row-major (only when bit 1 is set)
//! ```

use std::fmt::Write as _;

use super::camshift::TrackRecord;
use super::frame::{GrayFrame, Rect};
use super::TrackError;

pub const HEADER_BYTES: usize = 16;
pub const FLAG_LOST: u8 = 0b01;
pub const FLAG_ROI: u8 = 0b10;

pub const TRACK_LOG_HEADER: &str = "frame,cx,cy,w,h,m00,iters,lost,payload_bytes";

pub fn track_log_csv(records: &[TrackRecord]) -> String {
    let mut out = String::from(TRACK_LOG_HEADER);
    out.push('\n');
    for r in records {
        let w = &r.window;
        let _ = writeln!(
            out,
            "{},{:.3},{:.3},{},{},{:.4},{},{},{}",
            r.frame_index,
            w.cx,
            w.cy,
            w.rect.w,
            w.rect.h,
            w.m00,
            w.iterations,
            u8::from(w.lost),
            r.payload_bytes
        );
    }
    out
}

fn to_u16(value: i64, what: &str) -> Result<u16, TrackError> {
    u16::try_from(value).map_err(|_| TrackError::Parameter(format!("{what} {value} does not fit the stream header")))
}

/// Encode one record. ROI pixels are cut from `pixels`, which must be the
/// frame the record was tracked on.
pub fn encode_record(record: &TrackRecord, pixels: &GrayFrame, ship_roi: bool) -> Result<Vec<u8>, TrackError> {
    let rect = record.window.rect;
    if !rect.is_inside(pixels.width(), pixels.height()) {
        return Err(TrackError::InitWindow(rect));
    }
    let frame = u32::try_from(record.frame_index)
        .map_err(|_| TrackError::Parameter(format!("frame index {} exceeds u32", record.frame_index)))?;
    let mut out = Vec::with_capacity(HEADER_BYTES + if ship_roi { rect.area() } else { 0 });
    out.extend_from_slice(&frame.to_le_bytes());
    out.extend_from_slice(&to_u16(rect.x + rect.w as i64 / 2, "center x")?.to_le_bytes());
    out.extend_from_slice(&to_u16(rect.y + rect.h as i64 / 2, "center y")?.to_le_bytes());
    out.extend_from_slice(&to_u16(rect.w as i64, "width")?.to_le_bytes());
    out.extend_from_slice(&to_u16(rect.h as i64, "height")?.to_le_bytes());
    let mut flags = 0u8;
    if record.window.lost {
        flags |= FLAG_LOST;
    }
    if ship_roi {
        flags |= FLAG_ROI;
    }
    out.push(flags);
    out.extend_from_slice(&[0, 0, 0]);
    if ship_roi {
        let (x0, y0) = (rect.x as usize, rect.y as usize);
        for y in y0..y0 + rect.h {
            let row = y * pixels.width();
            out.extend_from_slice(&pixels.data()[row + x0..row + x0 + rect.w]);
        }
    }
    debug_assert_eq!(out.len(), if ship_roi { record.payload_bytes } else { HEADER_BYTES });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamRecord {
    pub frame_index: u32,
    pub rect: Rect,
    pub lost: bool,
    pub roi: Option<Vec<u8>>,
}

pub fn decode_stream(bytes: &[u8]) -> Result<Vec<StreamRecord>, TrackError> {
    let mut records = Vec::new();
    let mut pos = 0;
    let u16_at = |p: usize| u16::from_le_bytes([bytes[p], bytes[p + 1]]);
    while pos < bytes.len() {
        if bytes.len() - pos < HEADER_BYTES {
            return Err(TrackError::Stream { offset: pos, message: "truncated header".into() });
        }
        let frame_index = u32::from_le_bytes(bytes[pos..pos + 4].try_into().expect("4 bytes"));
        let cx = u16_at(pos + 4) as i64;
        let cy = u16_at(pos + 6) as i64;
        let w = u16_at(pos + 8) as usize;
        let h = u16_at(pos + 10) as usize;
        let flags = bytes[pos + 12];
        let rect = Rect::new(cx - w as i64 / 2, cy - h as i64 / 2, w, h);
        pos += HEADER_BYTES;
        let roi = if flags & FLAG_ROI != 0 {
            let n = w * h;
            if bytes.len() - pos < n {
                return Err(TrackError::Stream { offset: pos, message: format!("truncated ROI, need {n} bytes") });
            }
            let roi = bytes[pos..pos + n].to_vec();
            pos += n;
            Some(roi)
        } else {
            None
        };
        records.push(StreamRecord { frame_index, rect, lost: flags & FLAG_LOST != 0, roi });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracker::camshift::{payload_bytes, TrackWindow};

    fn record(rect: Rect, lost: bool) -> TrackRecord {
        let window = TrackWindow { lost, ..TrackWindow::from_rect(rect) };
        TrackRecord { frame_index: 7, window, payload_bytes: payload_bytes(&window, true) }
    }

    #[test]
    fn header_layout_is_fixed() {
        let frame = GrayFrame::new(4, 4, (0..16).collect()).unwrap();
        let bytes = encode_record(&record(Rect::new(1, 2, 3, 2), true), &frame, true).unwrap();
        assert_eq!(bytes.len(), HEADER_BYTES + 6);
        assert_eq!(&bytes[..16], &[7, 0, 0, 0, 2, 0, 3, 0, 3, 0, 2, 0, 3, 0, 0, 0]);
        assert_eq!(&bytes[16..], &[9, 10, 11, 13, 14, 15]);
    }

    #[test]
    fn stream_decodes_back() {
        let frame = GrayFrame::new(8, 8, (0..64).collect()).unwrap();
        let mut stream = encode_record(&record(Rect::new(0, 5, 4, 3), false), &frame, true).unwrap();
        stream.extend(encode_record(&record(Rect::new(3, 3, 5, 5), true), &frame, false).unwrap());
        let decoded = decode_stream(&stream).unwrap();
        assert_eq!(decoded.len(), 2);
        assert_eq!(decoded[0].rect, Rect::new(0, 5, 4, 3));
        assert_eq!(decoded[0].roi.as_ref().unwrap()[0], 40);
        assert!(decoded[1].lost && decoded[1].roi.is_none());
        assert_eq!(decoded[1].rect, Rect::new(3, 3, 5, 5));
        assert!(decode_stream(&stream[..20]).is_err());
    }

    #[test]
    fn log_header_and_columns() {
        let csv = track_log_csv(&[record(Rect::new(0, 0, 8, 8), false)]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(TRACK_LOG_HEADER));
        assert_eq!(lines.next().unwrap().split(',').count(), 9);
    }
}
