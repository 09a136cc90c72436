//! Residual bandwidth ability (RBA) and its one-step-ahead prediction.
//!
//! Each node keeps two numbers describing how its spare bandwidth is moving:
//! a smoothed "acceleration" (rate of change of RBA per second) and the
//! variance of that estimate. Every tick the node measures its RBA, blends the
//! measured rate of change into the smoothed one with a variance-driven gain,
//! and extrapolates one tick ahead.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictorError {
    #[error("measured RBA must be a finite non-negative number, got {0}")]
    NegativeRba(f64),
    #[error("process noise epsilon must be > 0, got {0}")]
    Epsilon(f64),
    #[error("tick length dt must be > 0, got {0}")]
    TickLength(f64),
    #[error("initial variance must be >= 0, got {0}")]
    InitialVariance(f64),
    #[error("trace line {line}: {message}")]
    Trace { line: usize, message: String },
}

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_DT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorParams {
    /// Process noise added to the variance each step; also the denominator
    /// offset of the blending factor.
    pub epsilon: f64,
    /// Tick length in seconds.
    pub dt: f64,
}

impl Default for PredictorParams {
    fn default() -> Self {
        Self { epsilon: DEFAULT_EPSILON, dt: DEFAULT_DT }
    }
}

impl PredictorParams {
    pub fn new(epsilon: f64, dt: f64) -> Result<Self, PredictorError> {
        let params = Self { epsilon, dt };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), PredictorError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(PredictorError::Epsilon(self.epsilon));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(PredictorError::TickLength(self.dt));
        }
        Ok(())
    }
}

/// One node's predictor memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorState {
    /// Smoothed RBA acceleration, bandwidth units per second.
    pub a_hat: f64,
    /// Variance of the acceleration estimate.
    pub v: f64,
    /// Most recent measured RBA.
    pub last_rba: f64,
    pub initialized: bool,
}

impl Default for PredictorState {
    fn default() -> Self {
        Self::with_prior(0.0, 1.0)
    }
}

impl PredictorState {
    /// Fresh state with the given initial acceleration and variance. The first
    /// measurement only records the RBA.
    pub fn with_prior(a_hat: f64, v: f64) -> Self {
        Self { a_hat, v, last_rba: 0.0, initialized: false }
    }

    pub fn try_with_prior(a_hat: f64, v: f64) -> Result<Self, PredictorError> {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(PredictorError::InitialVariance(v));
        }
        Ok(Self::with_prior(a_hat, v))
    }
}

/// Intermediate and final values of one predictor update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionStep {
    /// Measured acceleration `(r_k - r_{k-1}) / dt`. Zero on the recording step.
    pub accel: f64,
    /// Blending factor. Zero on the recording step.
    pub blend: f64,
    pub a_hat: f64,
    pub v: f64,
    /// `r_k + a_hat * dt`, unclamped.
    pub raw_prediction: f64,
    /// Raw prediction clamped below at zero.
    pub prediction: f64,
}

/// RBA of a node: capacity minus the traffic on its channel, never negative.
pub fn measure_rba(capacity: f64, load: f64) -> f64 {
    (capacity - load).max(0.0)
}

/// Run one predictor update with measurement `r_k` and return the new state
/// together with the prediction for the next tick.
pub fn update_and_predict(
    state: &PredictorState,
    params: &PredictorParams,
    r_k: f64,
) -> Result<(PredictorState, PredictionStep), PredictorError> {
    if !(r_k >= 0.0 && r_k.is_finite()) {
        return Err(PredictorError::NegativeRba(r_k));
    }

    if !state.initialized {
        let next = PredictorState { last_rba: r_k, initialized: true, ..*state };
        let step = PredictionStep {
            accel: 0.0,
            blend: 0.0,
            a_hat: state.a_hat,
            v: state.v,
            raw_prediction: r_k,
            prediction: r_k,
        };
        return Ok((next, step));
    }

    let accel = (r_k - state.last_rba) / params.dt;
    let a_prior = state.a_hat;
    let v_prior = state.v + params.epsilon;
    let blend = v_prior / (v_prior + params.epsilon);
    let a_hat = a_prior + blend * (accel - a_prior);
    let v = (1.0 - blend) * v_prior;
    let raw_prediction = r_k + a_hat * params.dt;

    let next = PredictorState { a_hat, v, last_rba: r_k, initialized: true };
    let step = PredictionStep { accel, blend, a_hat, v, raw_prediction, prediction: raw_prediction.max(0.0) };
    Ok((next, step))
}

/// Parse a replay trace: one RBA value per line. Blank lines are skipped.
pub fn parse_trace(text: &str) -> Result<Vec<f64>, PredictorError> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed
            .parse()
            .map_err(|_| PredictorError::Trace { line: idx + 1, message: format!("not a number: {trimmed:?}") })?;
        if !(value >= 0.0 && value.is_finite()) {
            return Err(PredictorError::Trace {
                line: idx + 1,
                message: format!("RBA must be finite and >= 0, got {value}"),
            });
        }
        values.push(value);
    }
    Ok(values)
}

/// Feed a whole trace through a fresh predictor.
pub fn replay(
    values: &[f64],
    params: &PredictorParams,
    initial: PredictorState,
) -> Result<Vec<PredictionStep>, PredictorError> {
    let mut state = initial;
    let mut steps = Vec::with_capacity(values.len());
    for &r in values {
        let (next, step) = update_and_predict(&state, params, r)?;
        state = next;
        steps.push(step);
    }
    Ok(steps)
}

pub const TRACE_CSV_HEADER: &str = "step,a,B,a_hat,v,R_hat";

/// Render replay steps as CSV with 7 significant digits.
pub fn steps_to_csv(steps: &[PredictionStep]) -> String {
    let mut out = String::new();
    if steps.is_empty() {
        return out;
    }
    out.push_str(TRACE_CSV_HEADER);
    out.push('\n');
    for (k, s) in steps.iter().enumerate() {
        let _ = writeln!(
            out,
            "{k},{},{},{},{},{}",
            sig7(s.accel),
            sig7(s.blend),
            sig7(s.a_hat),
            sig7(s.v),
            sig7(s.prediction)
        );
    }
    out
}

/// Format like C's `%.7g`: 7 significant digits, trailing zeros trimmed,
/// scientific notation outside `[1e-4, 1e7)`.
pub fn sig7(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.6e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..7).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (6 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
