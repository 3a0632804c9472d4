use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::StateSequence;
use crate::math;
use crate::stats::{max_of, mean, min_of, percentile};

/// Channels for which quartiles are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Speed,
    Accel,
    AbsJerk,
    AbsYawRate,
    LatAccel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
}

impl Quartiles {
    fn of(values: &[f64]) -> Self {
        let p = |q| percentile(values, q).unwrap_or(0.0);
        Self {
            p25: p(25.0),
            p50: p(50.0),
            p75: p(75.0),
        }
    }
}

/// Clip-level statistics that the labeling rules read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KinematicSummary {
    pub max_speed: f64,
    pub min_speed: f64,
    pub mean_speed: f64,
    pub min_accel: f64,
    pub max_accel: f64,
    pub mean_accel: f64,
    pub max_abs_jerk: f64,
    pub mean_abs_jerk: f64,
    pub max_abs_yaw_rate: f64,
    /// Peak of |v·ω| over the samples.
    pub max_lat_accel: f64,
    /// |θ_end − θ_start| on the unwrapped heading.
    pub total_heading_change: f64,
    /// Σ|Δθ| along the clip.
    pub path_heading_change: f64,
    pub percentiles: BTreeMap<Channel, Quartiles>,
}

/// Per-sample lateral acceleration v·ω.
pub(crate) fn lateral_accel(seq: &StateSequence) -> Vec<f64> {
    seq.v().iter().zip(seq.omega()).map(|(v, w)| v * w).collect()
}

pub fn summarize(seq: &StateSequence) -> KinematicSummary {
    let abs = |xs: &[f64]| xs.iter().map(|x| math::abs(*x)).collect::<Vec<_>>();
    let abs_jerk = abs(seq.j());
    let abs_yaw = abs(seq.omega());
    let lat = abs(&lateral_accel(seq));
    let theta = seq.theta();
    let path: f64 = theta.windows(2).map(|w| math::abs(w[1] - w[0])).sum();

    let mut percentiles = BTreeMap::new();
    percentiles.insert(Channel::Speed, Quartiles::of(seq.v()));
    percentiles.insert(Channel::Accel, Quartiles::of(seq.a()));
    percentiles.insert(Channel::AbsJerk, Quartiles::of(&abs_jerk));
    percentiles.insert(Channel::AbsYawRate, Quartiles::of(&abs_yaw));
    percentiles.insert(Channel::LatAccel, Quartiles::of(&lat));

    KinematicSummary {
        max_speed: max_of(seq.v()),
        min_speed: min_of(seq.v()),
        mean_speed: mean(seq.v()),
        min_accel: min_of(seq.a()),
        max_accel: max_of(seq.a()),
        mean_accel: mean(seq.a()),
        max_abs_jerk: max_of(&abs_jerk),
        mean_abs_jerk: mean(&abs_jerk),
        max_abs_yaw_rate: max_of(&abs_yaw),
        max_lat_accel: max_of(&lat),
        total_heading_change: math::abs(theta[theta.len() - 1] - theta[0]),
        path_heading_change: path,
        percentiles,
    }
}
