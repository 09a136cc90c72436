//! Command-line front end: `track`, `simulate`, `predict`, `gen-frames`.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};
use crate::predictor::{parse_trace, replay, steps_to_csv, PredictorParams, PredictorState};
use crate::sim::{alive_csv, delivered_csv, run_experiment, SimError};
use crate::tracker::{
    encode_record, track_gray_sequence, track_log_csv, BlobSequence, GrayFrame, Rect, TrackConfig, TrackError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Sim(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Conservation { .. } => CliError::Internal(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wmsn", version, about = "Wireless multimedia sensor network tracking and routing simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Track a blob through a PGM sequence and write the track log and
    /// compressed stream.
    Track(TrackArgs),
    /// Run the simulation matrix described by a config file.
    Simulate(SimulateArgs),
    /// Replay an RBA trace through the predictor.
    Predict(PredictArgs),
    /// Write a synthetic moving-blob PGM sequence.
    GenFrames(GenFramesArgs),
}

#[derive(Debug, Args)]
pub struct BlobArgs {
    #[arg(long, default_value_t = 100)]
    pub frames: usize,
    #[arg(long, default_value_t = 128)]
    pub width: usize,
    #[arg(long, default_value_t = 128)]
    pub height: usize,
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
    /// Pixels per frame along x.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub vx: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub vy: f64,
    /// Sigma added per frame.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub growth: f64,
}

impl BlobArgs {
    pub fn sequence(&self) -> BlobSequence {
        let sigma = self.sigma;
        BlobSequence {
            width: self.width,
            height: self.height,
            frames: self.frames,
            start: (4.0 * sigma + 2.0, self.height as f64 / 2.0),
            velocity: (self.vx, self.vy),
            sigma,
            growth: self.growth,
            ..BlobSequence::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct TrackArgs {
    /// Directory of `.pgm` frames, read in file-name order. Without it a
    /// synthetic blob sequence is tracked.
    #[arg(long)]
    pub frames_dir: Option<PathBuf>,
    /// Initial window `x,y,w,h`; defaults to the synthetic blob's start.
    #[arg(long, value_parser = parse_rect)]
    pub init: Option<Rect>,
    #[arg(long, default_value = "track_out")]
    pub out: PathBuf,
    /// Send headers only, without the ROI pixels.
    #[arg(long)]
    pub headers_only: bool,
    #[command(flatten)]
    pub blob: BlobArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `output.dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `experiment.base_seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// One RBA value per line.
    pub trace: PathBuf,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub v0: f64,
}

#[derive(Debug, Args)]
pub struct GenFramesArgs {
    #[arg(long, default_value = "frames")]
    pub out: PathBuf,
    #[command(flatten)]
    pub blob: BlobArgs,
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, w, h] = parts.as_slice() else {
        return Err(format!("expected x,y,w,h, got {s:?}"));
    };
    let int = |v: &str| v.parse::<i64>().map_err(|e| format!("{v:?}: {e}"));
    let size = |v: &str| v.parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Rect { x: int(x)?, y: int(y)?, w: size(w)?, h: size(h)? })
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Track(args) => cmd_track(&args).map(|summary| println!("{summary}")),
        Command::Simulate(args) => cmd_simulate(&args).map(|dir| println!("wrote results to {}", dir.display())),
        Command::Predict(args) => cmd_predict(&args),
        Command::GenFrames(args) => cmd_gen_frames(&args).map(|n| println!("wrote {n} frames")),
    }
}

fn track_error(e: TrackError) -> CliError {
    CliError::Validation(e.to_string())
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

pub fn read_pgm_dir(dir: &Path) -> Result<Vec<GrayFrame>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "pgm"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Validation(format!("{}: no .pgm frames found", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let bytes = fs::read(p).map_err(|e| CliError::io(p, e))?;
            GrayFrame::from_pgm(&bytes).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))
        })
        .collect()
}

/// Outcome of `track`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackSummary {
    pub records: usize,
    pub raw_bytes: usize,
    pub compressed_bytes: usize,
}

impl TrackSummary {
    pub fn ratio(&self) -> f64 {
        self.compressed_bytes as f64 / self.raw_bytes as f64
    }
}

impl std::fmt::Display for TrackSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} frames, {} raw bytes, {} compressed bytes, ratio {:.4}",
            self.records,
            self.raw_bytes,
            self.compressed_bytes,
            self.ratio()
        )
    }
}

/// Writes `track.csv` and `stream.bin` into `args.out`.
pub fn cmd_track(args: &TrackArgs) -> Result<TrackSummary, CliError> {
    let (frames, default_init) = match &args.frames_dir {
        Some(dir) => (read_pgm_dir(dir)?, None),
        None => {
            let seq = args.blob.sequence();
            seq.validate().map_err(track_error)?;
            (seq.gray_frames().map_err(track_error)?, Some(seq.initial_window()))
        }
    };
    let init = args
        .init
        .or(default_init)
        .ok_or_else(|| CliError::Validation("--init x,y,w,h is required with --frames-dir".into()))?;
    let config = TrackConfig { ship_roi: !args.headers_only, ..TrackConfig::default() };
    let records = track_gray_sequence(&frames, init, &config).map_err(track_error)?;

    let mut stream = Vec::new();
    for (record, frame) in records.iter().zip(&frames) {
        stream.extend(encode_record(record, frame, config.ship_roi).map_err(track_error)?);
    }
    create_dir(&args.out)?;
    write(&args.out.join("track.csv"), track_log_csv(&records).as_bytes())?;
    write(&args.out.join("stream.bin"), &stream)?;
    Ok(TrackSummary {
        records: records.len(),
        raw_bytes: frames.iter().map(|f| f.data().len()).sum(),
        compressed_bytes: stream.len(),
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ExperimentConfig::parse(&text).map_err(|e| CliError::Validation(format!("{}:\n{e}", path.display())))
}

/// Writes `delivered.csv`, one `alive_n{n}.csv` per node count, and the
/// effective `config.txt`. Returns the output directory.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<PathBuf, CliError> {
    let mut config = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    }
    if let Some(out) = &args.out {
        config.output_dir = out.clone();
    }
    let spec = config.experiment_spec()?;
    let results = run_experiment(&spec, args.jobs)?;

    let dir = config.output_dir.clone();
    create_dir(&dir)?;
    write(&dir.join("config.txt"), config.to_text().as_bytes())?;
    write(&dir.join("delivered.csv"), delivered_csv(&results).as_bytes())?;
    for &n in &spec.node_counts {
        write(&dir.join(format!("alive_n{n}.csv")), alive_csv(&results, n).as_bytes())?;
    }
    Ok(dir)
}

/// Predictor CSV for a trace file.
pub fn predict_csv(args: &PredictArgs) -> Result<String, CliError> {
    let text = fs::read_to_string(&args.trace).map_err(|e| CliError::io(&args.trace, e))?;
    let values = parse_trace(&text).map_err(|e| CliError::Validation(format!("{}: {e}", args.trace.display())))?;
    let params = PredictorParams::new(args.epsilon, args.dt).map_err(|e| CliError::Validation(e.to_string()))?;
    let initial = PredictorState::try_with_prior(args.a0, args.v0).map_err(|e| CliError::Validation(e.to_string()))?;
    let steps = replay(&values, &params, initial).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(steps_to_csv(&steps))
}

pub fn cmd_predict(args: &PredictArgs) -> Result<(), CliError> {
    let csv = predict_csv(args)?;
    match &args.out {
        Some(path) => write(path, csv.as_bytes()),
        None => std::io::stdout().write_all(csv.as_bytes()).map_err(|e| CliError::Io(format!("standard output: {e}"))),
    }
}

/// Writes `frame_0000.pgm`, `frame_0001.pgm`, ... and returns the count.
pub fn cmd_gen_frames(args: &GenFramesArgs) -> Result<usize, CliError> {
    let seq = args.blob.sequence();
    seq.validate().map_err(track_error)?;
    create_dir(&args.out)?;
    for k in 0..seq.frames {
        let frame = seq.gray_frame(k).map_err(track_error)?;
        write(&args.out.join(format!("frame_{k:04}.pgm")), &frame.to_pgm())?;
    }
    Ok(seq.frames)
}
