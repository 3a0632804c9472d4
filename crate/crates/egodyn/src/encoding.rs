//! Text renderings of a clip for model prompts.

use std::fmt::Write;

use egodyn_core::kinematics::{KinematicSummary, StateSequence};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    #[default]
    Summary,
    Timeseries,
    Coordinates,
    Full,
}

impl Encoding {
    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::Summary => "summary",
            Encoding::Timeseries => "timeseries",
            Encoding::Coordinates => "coordinates",
            Encoding::Full => "full",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EncodingError {
    #[error("coordinates encoding needs x/y positions")]
    MissingChannels,
    #[error("need at least 2 time steps, got {0}")]
    TooFewSteps(usize),
}

/// Fixed-point with `decimals` places; never renders a negative zero.
pub fn fixed(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Linear interpolation of `values` at `n` evenly spaced points spanning
/// the clip, so rows line up with `n` frames sampled over the window.
fn resample(values: &[f64], n: usize) -> Vec<f64> {
    let last = values.len() - 1;
    (0..n)
        .map(|i| {
            let pos = i as f64 * last as f64 / (n - 1) as f64;
            let k = (pos.floor() as usize).min(last);
            let frac = pos - k as f64;
            if k == last || frac == 0.0 {
                values[k]
            } else {
                values[k] + (values[k + 1] - values[k]) * frac
            }
        })
        .collect()
}

fn row(out: &mut String, label: &str, values: &[f64], decimals: usize) {
    let cells: Vec<String> = values.iter().map(|v| fixed(*v, decimals)).collect();
    let _ = write!(out, "\n{label}: {}", cells.join(", "));
}

fn times(seq: &StateSequence, n: usize) -> Vec<f64> {
    let t0 = seq.t()[0];
    resample(seq.t(), n).into_iter().map(|t| t - t0).collect()
}

pub fn summary_block(s: &KinematicSummary) -> String {
    format!(
        "Vehicle dynamics: max_speed = {} m/s ({}km/h), mean_speed = {} m/s, min_accel = {} m/s², \
         max_yaw_rate = {} rad/s, max_jerk = {} m/s³, mean_jerk = {} m/s³, max_lat_accel = {} m/s², \
         heading_change = {} rad.",
        fixed(s.max_speed, 1),
        fixed(s.max_speed * 3.6, 0),
        fixed(s.mean_speed, 1),
        fixed(s.min_accel, 2),
        fixed(s.max_abs_yaw_rate, 3),
        fixed(s.max_abs_jerk, 2),
        fixed(s.mean_abs_jerk, 2),
        fixed(s.max_lat_accel, 2),
        fixed(s.total_heading_change, 3),
    )
}

pub fn timeseries_block(seq: &StateSequence, n: usize) -> String {
    let mut out = format!("Vehicle dynamics ({n} time-steps over {}s):", fixed(seq.duration(), 1));
    row(&mut out, "t(s)", &times(seq, n), 2);
    row(&mut out, "speed (m/s)", &resample(seq.v(), n), 1);
    row(&mut out, "accel (m/s²)", &resample(seq.a(), n), 2);
    row(&mut out, "yaw_rate (rad/s)", &resample(seq.omega(), n), 3);
    row(&mut out, "jerk (m/s³)", &resample(seq.j(), n), 2);
    out
}

/// Positions are shifted so the first waypoint is the origin; heading is
/// left as is.
pub fn coordinates_block(seq: &StateSequence, n: usize) -> Result<String, EncodingError> {
    let (x, y) = seq.positions().ok_or(EncodingError::MissingChannels)?;
    let (x, y) = (resample(x, n), resample(y, n));
    let x: Vec<f64> = x.iter().map(|v| v - x[0]).collect();
    let y: Vec<f64> = y.iter().map(|v| v - y[0]).collect();
    let mut out = format!(
        "Vehicle trajectory ({n} waypoints over {}s, metres):",
        fixed(seq.duration(), 1)
    );
    row(&mut out, "t(s)", &times(seq, n), 2);
    row(&mut out, "x(m)", &x, 1);
    row(&mut out, "y(m)", &y, 1);
    row(&mut out, "heading (rad)", &resample(seq.theta(), n), 3);
    Ok(out)
}

pub fn encode_trajectory(
    seq: &StateSequence,
    summary: &KinematicSummary,
    mode: Encoding,
    n_steps: usize,
) -> Result<String, EncodingError> {
    if mode != Encoding::Summary && n_steps < 2 {
        return Err(EncodingError::TooFewSteps(n_steps));
    }
    Ok(match mode {
        Encoding::Summary => summary_block(summary),
        Encoding::Timeseries => timeseries_block(seq, n_steps),
        Encoding::Coordinates => coordinates_block(seq, n_steps)?,
        Encoding::Full => format!(
            "{}\n{}",
            timeseries_block(seq, n_steps),
            coordinates_block(seq, n_steps)?
        ),
    })
}
