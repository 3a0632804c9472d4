use alloc::vec::Vec;

use super::{ConfigError, ThresholdConfig};
use crate::kinematics::KinematicSummary;
use crate::stats::percentile;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalibrationError {
    #[error("calibration needs at least {needed} clips, got {got}")]
    TooFewClips { needed: usize, got: usize },
    #[error("calibration needs at least {needed} clips that decelerate, got {got}")]
    TooFewBrakingClips { needed: usize, got: usize },
    #[error("calibrated thresholds are invalid: {0}")]
    Invalid(#[from] ConfigError),
}

/// Re-derives the dataset-specific thresholds from a corpus.
///
/// Braking buckets go to the quartiles of the per-clip minimum acceleration
/// over clips that decelerate at all (min acceleration below zero);
/// smoothness buckets go to the tertiles of the per-clip mean |jerk|. All
/// physics-anchored thresholds are copied from `base`.
pub fn calibrate_thresholds(
    summaries: &[KinematicSummary],
    base: &ThresholdConfig,
) -> Result<ThresholdConfig, CalibrationError> {
    const NEEDED: usize = 4;
    if summaries.len() < NEEDED {
        return Err(CalibrationError::TooFewClips {
            needed: NEEDED,
            got: summaries.len(),
        });
    }
    let min_accel: Vec<f64> = summaries.iter().map(|s| s.min_accel).filter(|a| *a < 0.0).collect();
    if min_accel.len() < NEEDED {
        return Err(CalibrationError::TooFewBrakingClips {
            needed: NEEDED,
            got: min_accel.len(),
        });
    }
    let mean_jerk: Vec<f64> = summaries.iter().map(|s| s.mean_abs_jerk).collect();
    let p = |values: &[f64], q: f64| percentile(values, q).unwrap_or(0.0);
    let cfg = ThresholdConfig {
        brake_emergency: p(&min_accel, 25.0),
        brake_moderate: p(&min_accel, 50.0),
        brake_low: p(&min_accel, 75.0),
        jerk_smooth: p(&mean_jerk, 100.0 / 3.0),
        jerk_moderate: p(&mean_jerk, 200.0 / 3.0),
        ..base.clone()
    };
    cfg.validate()?;
    Ok(cfg)
}
