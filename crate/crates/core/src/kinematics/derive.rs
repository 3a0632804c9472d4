use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{KinematicsError, PoseSample, SavGol, SpeedSample, StateChannels, StateSequence, GRID_TOLERANCE_S};
use crate::math;

/// Savitzky-Golay settings for each differentiation stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoothingConfig {
    /// Applied to x/y before computing speed.
    pub position: SavGol,
    /// Applied to speed before computing acceleration.
    pub speed: SavGol,
    /// Applied to acceleration before computing jerk.
    pub accel: SavGol,
    /// Applied to the unwrapped heading before computing yaw rate.
    pub heading: SavGol,
}

/// First derivative on a uniform grid: central differences inside,
/// second-order one-sided differences at both ends.
pub fn gradient(values: &[f64], dt: f64) -> Vec<f64> {
    let n = values.len();
    match n {
        0 => Vec::new(),
        1 => alloc::vec![0.0],
        2 => {
            let d = (values[1] - values[0]) / dt;
            alloc::vec![d, d]
        }
        _ => {
            let mut out = Vec::with_capacity(n);
            out.push((-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt));
            for i in 1..n - 1 {
                out.push((values[i + 1] - values[i - 1]) / (2.0 * dt));
            }
            out.push((3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt));
            out
        }
    }
}

/// Removes 2π jumps between consecutive angles.
pub fn unwrap_angles(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    let mut prev: Option<(f64, f64)> = None;
    for &a in angles {
        let u = match prev {
            None => a,
            Some((raw, unwrapped)) => unwrapped + math::wrap_angle(a - raw),
        };
        out.push(u);
        prev = Some((a, u));
    }
    out
}

fn uniform_dt(times: &[f64]) -> Result<f64, KinematicsError> {
    if times.len() < 2 {
        return Err(KinematicsError::TooFewSamples {
            needed: 2,
            got: times.len(),
        });
    }
    super::check_times(times.iter().copied())?;
    let dt = times[1] - times[0];
    for i in 2..times.len() {
        if math::abs(times[i] - times[i - 1] - dt) > GRID_TOLERANCE_S {
            return Err(KinematicsError::NonUniformGrid { index: i });
        }
    }
    Ok(dt)
}

/// Full state chain from uniformly sampled poses.
///
/// Speed is the magnitude of the smoothed position derivative, acceleration the
/// derivative of smoothed speed, jerk the derivative of smoothed acceleration and
/// yaw rate the derivative of the smoothed, unwrapped heading.
pub fn derive_states(poses: &[PoseSample], smoothing: &SmoothingConfig) -> Result<StateSequence, KinematicsError> {
    let t: Vec<f64> = poses.iter().map(|p| p.t).collect();
    let dt = uniform_dt(&t)?;
    let x: Vec<f64> = poses.iter().map(|p| p.x).collect();
    let y: Vec<f64> = poses.iter().map(|p| p.y).collect();
    let theta = unwrap_angles(&poses.iter().map(|p| p.heading).collect::<Vec<_>>());

    let vx = gradient(&smoothing.position.apply(&x)?, dt);
    let vy = gradient(&smoothing.position.apply(&y)?, dt);
    let v: Vec<f64> = vx.iter().zip(&vy).map(|(a, b)| libm::hypot(*a, *b)).collect();
    let a = gradient(&smoothing.speed.apply(&v)?, dt);
    let j = gradient(&smoothing.accel.apply(&a)?, dt);
    let omega = gradient(&smoothing.heading.apply(&theta)?, dt);

    StateSequence::new(StateChannels {
        t,
        v,
        a,
        j,
        omega,
        theta,
        x: Some(x),
        y: Some(y),
    })
}

/// State chain from a log that already carries speed and yaw rate.
///
/// Acceleration and jerk are differentiated as in [`derive_states`]; heading and
/// positions are integrated with the trapezoid rule starting from
/// `initial_heading` at the origin.
pub fn derive_from_speed(
    samples: &[SpeedSample],
    smoothing: &SmoothingConfig,
    initial_heading: f64,
) -> Result<StateSequence, KinematicsError> {
    let t: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let dt = uniform_dt(&t)?;
    let v: Vec<f64> = samples.iter().map(|s| s.v).collect();
    let omega: Vec<f64> = samples.iter().map(|s| s.omega).collect();
    let a = gradient(&smoothing.speed.apply(&v)?, dt);
    let j = gradient(&smoothing.accel.apply(&a)?, dt);

    let n = t.len();
    let mut theta = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    theta.push(initial_heading);
    x.push(0.0);
    y.push(0.0);
    for i in 1..n {
        theta.push(theta[i - 1] + 0.5 * (omega[i - 1] + omega[i]) * dt);
        let vx = |k: usize| v[k] * math::cos(theta[k]);
        let vy = |k: usize| v[k] * math::sin(theta[k]);
        x.push(x[i - 1] + 0.5 * (vx(i - 1) + vx(i)) * dt);
        y.push(y[i - 1] + 0.5 * (vy(i - 1) + vy(i)) * dt);
    }

    StateSequence::new(StateChannels {
        t,
        v,
        a,
        j,
        omega,
        theta,
        x: Some(x),
        y: Some(y),
    })
}
