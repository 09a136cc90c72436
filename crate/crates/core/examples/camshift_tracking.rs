// Track a synthetic moving blob with CamShift and measure how much the ROI
// stream saves over shipping raw frames.

use std::error::Error;

use wmsn::tracker::{decode_stream, encode_record, track_gray_sequence, track_log_csv, BlobSequence, TrackConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let blob = BlobSequence { velocity: (2.0, 0.5), ..BlobSequence::default() };
    let frames = blob.gray_frames()?;
    let config = TrackConfig::default();
    let records = track_gray_sequence(&frames, blob.initial_window(), &config)?;

    let mut worst = 0.0f64;
    for (k, r) in records.iter().enumerate().skip(2) {
        let (tx, ty) = blob.center(k);
        worst = worst.max(((r.window.cx - tx).powi(2) + (r.window.cy - ty).powi(2)).sqrt());
    }

    let mut stream = Vec::new();
    for (r, f) in records.iter().zip(&frames) {
        stream.extend(encode_record(r, f, config.ship_roi)?);
    }
    let raw: usize = frames.iter().map(|f| f.data().len()).sum();
    let decoded = decode_stream(&stream)?;

    println!("{}", track_log_csv(&records[..5]).trim_end());
    println!("worst centroid error after frame 2: {worst:.3} px");
    println!("stream {} bytes vs raw {raw} bytes, ratio {:.4}", stream.len(), stream.len() as f64 / raw as f64);
    println!("decoded {} records", decoded.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
