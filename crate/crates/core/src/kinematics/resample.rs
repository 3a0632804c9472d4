use alloc::vec::Vec;

use super::{check_times, KinematicsError, PoseSample, SpeedSample, GRID_TOLERANCE_S};
use crate::math;

/// Uniform grid `t0 + k / rate` covering exactly `window_s`, endpoints included.
fn grid(times: &[f64], rate_hz: f64, window_s: f64) -> Result<Vec<f64>, KinematicsError> {
    if !(rate_hz > 0.0 && rate_hz.is_finite() && window_s > 0.0 && window_s.is_finite()) {
        return Err(KinematicsError::InvalidGrid);
    }
    if times.len() < 2 {
        return Err(KinematicsError::TooFewSamples {
            needed: 2,
            got: times.len(),
        });
    }
    check_times(times.iter().copied())?;
    let t0 = times[0];
    let span = times[times.len() - 1] - t0;
    if span < window_s - GRID_TOLERANCE_S {
        return Err(KinematicsError::InsufficientSpan { span, window: window_s });
    }
    let steps = math::round(window_s * rate_hz) as usize;
    Ok((0..=steps).map(|k| t0 + k as f64 / rate_hz).collect())
}

/// For every grid time, the bracketing segment `i` (with `times[i] <= t <= times[i+1]`)
/// and the interpolation fraction.
fn brackets(times: &[f64], grid: &[f64]) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(grid.len());
    let mut i = 0;
    for &tg in grid {
        while i + 2 < times.len() && times[i + 1] < tg {
            i += 1;
        }
        let span = times[i + 1] - times[i];
        let frac = ((tg - times[i]) / span).clamp(0.0, 1.0);
        out.push((i, frac));
    }
    out
}

/// Resamples raw poses onto a uniform grid at `rate_hz` covering `window_s`
/// from the first timestamp.
///
/// Positions are interpolated linearly and heading along the shortest arc, so
/// a log crossing the ±π seam does not swing through zero.
pub fn resample_uniform(
    samples: &[PoseSample],
    rate_hz: f64,
    window_s: f64,
) -> Result<Vec<PoseSample>, KinematicsError> {
    for (index, s) in samples.iter().enumerate() {
        if !(s.x.is_finite() && s.y.is_finite() && s.heading.is_finite()) {
            return Err(KinematicsError::NonFinite { index });
        }
    }
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let grid = grid(&times, rate_hz, window_s)?;
    let out = grid
        .iter()
        .zip(brackets(&times, &grid))
        .map(|(&t, (i, frac))| {
            let (p, q) = (samples[i], samples[i + 1]);
            PoseSample {
                t,
                x: p.x + (q.x - p.x) * frac,
                y: p.y + (q.y - p.y) * frac,
                heading: p.heading + math::wrap_angle(q.heading - p.heading) * frac,
            }
        })
        .collect();
    Ok(out)
}

/// Resamples a speed/yaw-rate log with linear interpolation.
pub fn resample_speed_uniform(
    samples: &[SpeedSample],
    rate_hz: f64,
    window_s: f64,
) -> Result<Vec<SpeedSample>, KinematicsError> {
    for (index, s) in samples.iter().enumerate() {
        if !(s.v.is_finite() && s.omega.is_finite()) {
            return Err(KinematicsError::NonFinite { index });
        }
        if s.v < 0.0 {
            return Err(KinematicsError::NegativeSpeed { index });
        }
    }
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let grid = grid(&times, rate_hz, window_s)?;
    let out = grid
        .iter()
        .zip(brackets(&times, &grid))
        .map(|(&t, (i, frac))| {
            let (p, q) = (samples[i], samples[i + 1]);
            SpeedSample {
                t,
                v: p.v + (q.v - p.v) * frac,
                omega: p.omega + (q.omega - p.omega) * frac,
            }
        })
        .collect();
    Ok(out)
}
