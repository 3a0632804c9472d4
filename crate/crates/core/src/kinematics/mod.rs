//! Pose/state ingestion, smoothing and the kinematic state chain.
//!
//! A clip is a short window of samples on a uniform time grid (10 Hz over
//! 3 s by default, 31 samples with both endpoints). Raw poses are resampled
//! onto that grid, smoothed with a Savitzky-Golay filter before every
//! differentiation, and turned into speed, longitudinal acceleration, jerk and
//! yaw rate.

mod derive;
mod resample;
mod savgol;
mod sequence;
mod summary;

pub use derive::{derive_from_speed, derive_states, gradient, unwrap_angles, SmoothingConfig};
pub use resample::{resample_speed_uniform, resample_uniform};
pub use savgol::{smooth_savgol, SavGol};
pub use sequence::{StateChannels, StateSequence};
pub use summary::{summarize, Channel, KinematicSummary, Quartiles};

use serde::{Deserialize, Serialize};

/// Default sampling rate of a clip.
pub const DEFAULT_RATE_HZ: f64 = 10.0;
/// Default clip duration.
pub const DEFAULT_WINDOW_S: f64 = 3.0;

/// Tolerance used when comparing timestamps on a grid.
pub const GRID_TOLERANCE_S: f64 = 1e-9;

/// One raw ego pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseSample {
    /// Seconds.
    pub t: f64,
    /// Meters.
    pub x: f64,
    /// Meters.
    pub y: f64,
    /// Radians, counter-clockwise positive.
    pub heading: f64,
}

/// One sample of a log that already carries speed and yaw rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedSample {
    pub t: f64,
    /// m/s, non-negative.
    pub v: f64,
    /// rad/s, positive = left.
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KinematicsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("timestamps not strictly increasing at index {index}")]
    NonMonotonicTime { index: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("log spans {span} s, shorter than the {window} s window")]
    InsufficientSpan { span: f64, window: f64 },
    #[error("rate and window must be positive and finite")]
    InvalidGrid,
    #[error("samples are not on a uniform grid (index {index})")]
    NonUniformGrid { index: usize },
    #[error("smoothing window {window} is larger than the signal length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("smoothing window must be odd and positive, got {0}")]
    EvenWindow(usize),
    #[error("polynomial order {order} must be smaller than the window {window}")]
    InvalidPolyOrder { order: usize, window: usize },
    #[error("channel `{channel}` has length {len}, expected {expected}")]
    ChannelLength {
        channel: &'static str,
        len: usize,
        expected: usize,
    },
    #[error("speed must be non-negative (index {index})")]
    NegativeSpeed { index: usize },
    #[error("x and y positions must be given together")]
    PartialPositions,
}

pub(crate) fn check_times(times: impl Iterator<Item = f64>) -> Result<usize, KinematicsError> {
    let mut prev = f64::NEG_INFINITY;
    let mut n = 0;
    for (index, t) in times.enumerate() {
        if !t.is_finite() {
            return Err(KinematicsError::NonFinite { index });
        }
        if t <= prev {
            return Err(KinematicsError::NonMonotonicTime { index });
        }
        prev = t;
        n += 1;
    }
    Ok(n)
}
