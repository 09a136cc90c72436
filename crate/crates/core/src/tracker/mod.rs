//! CamShift tracking that turns a video into ROI-cropped per-frame payloads.
//!
//! Each frame is back-projected against the target's intensity histogram,
//! mean shift climbs to the mode inside the search window, and the window is
//! resized from the zeroth moment before it seeds the next frame. Only the
//! window's pixels plus a small header are shipped downstream.

mod backproject;
mod camshift;
mod frame;
mod moments;
mod stream;
mod synth;

use thiserror::Error;

pub use backproject::{back_project, back_project_region, Histogram, DEFAULT_BINS};
pub use camshift::{
    camshift_step, mean_shift, payload_bytes, track_gray_sequence, track_sequence, window_side, TrackConfig,
    TrackRecord, TrackWindow, Tracker,
};
pub use frame::{GrayFrame, ProbabilityFrame, Rect};
pub use moments::{window_moments, Moments};
pub use stream::{
    decode_stream, encode_record, track_log_csv, StreamRecord, FLAG_LOST, FLAG_ROI, HEADER_BYTES, TRACK_LOG_HEADER,
};
pub use synth::{gaussian_frame, BlobSequence};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackError {
    #[error("frame has zero width or height")]
    EmptyFrame,
    #[error("pixel buffer holds {actual} values, expected {expected}")]
    FrameSize { expected: usize, actual: usize },
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("histogram needs 2..=256 bins, got {0}")]
    BinCount(usize),
    #[error("histogram bin {0} is negative or not finite")]
    NegativeBin(f64),
    #[error("target histogram is all zero")]
    DegenerateHistogram,
    #[error("window does not intersect the frame")]
    EmptyIntersection,
    #[error("initial window {0:?} is not inside the frame")]
    InitWindow(Rect),
    #[error("no frames to track")]
    NoFrames,
    #[error("invalid tracking parameter: {0}")]
    Parameter(String),
    #[error("malformed PGM at byte {offset}: {message}")]
    Pgm { offset: usize, message: String },
    #[error("malformed stream at byte {offset}: {message}")]
    Stream { offset: usize, message: String },
}
