use serde::{Deserialize, Serialize};

/// How the heading-change rule measures "cumulative" heading change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadingChangeMode {
    /// |θ_end − θ_start|.
    #[default]
    Net,
    /// Σ|Δθ| along the clip.
    Path,
}

/// Every oracle threshold, plus the uniform perturbation factor `alpha`.
///
/// Units: rad/s, m/s², m/s, m/s³, rad. Thresholds are stored at nominal
/// scale; rules read [`ThresholdConfig::scaled`], which multiplies each
/// magnitude by `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    pub turn_deadzone: f64,
    pub brake_emergency: f64,
    pub brake_moderate: f64,
    pub brake_low: f64,
    pub speed_stopped: f64,
    pub speed_slow: f64,
    pub speed_urban: f64,
    pub jerk_smooth: f64,
    pub jerk_moderate: f64,
    pub trend_deadzone: f64,
    pub lat_accel_high: f64,
    pub heading_change_min: f64,
    pub extreme_jerk: f64,
    pub extreme_accel: f64,
    pub stopgo_stop: f64,
    pub stopgo_move: f64,
    pub btt_brake: f64,
    pub btt_yaw: f64,
    pub mean_speed_low: f64,
    /// Minimum speed range (m/s) for the peak-half question to have a peak.
    pub peak_epsilon: f64,
    /// Relative band under which the two halves count as similar.
    pub contrastive_rel_band: f64,
    /// Absolute band (m/s³) under which the two halves count as similar.
    pub contrastive_abs_band: f64,
    pub heading_change_mode: HeadingChangeMode,
    /// Also count moving → stopped as stop-and-go.
    pub stop_go_bidirectional: bool,
    pub alpha: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            turn_deadzone: 0.04,
            brake_emergency: -1.59,
            brake_moderate: -0.89,
            brake_low: -0.18,
            speed_stopped: 0.5,
            speed_slow: 5.0,
            speed_urban: 13.9,
            jerk_smooth: 1.25,
            jerk_moderate: 2.15,
            trend_deadzone: 0.25,
            lat_accel_high: 2.0,
            heading_change_min: 0.2618,
            extreme_jerk: 20.0,
            extreme_accel: -3.924,
            stopgo_stop: 0.5,
            stopgo_move: 2.0,
            btt_brake: -1.5,
            btt_yaw: 0.1,
            mean_speed_low: 5.0,
            peak_epsilon: 0.5,
            contrastive_rel_band: 0.15,
            contrastive_abs_band: 0.1,
            heading_change_mode: HeadingChangeMode::Net,
            stop_go_bidirectional: false,
            alpha: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("threshold `{0}` is not finite")]
    NonFinite(&'static str),
    #[error("threshold ordering violated: {0}")]
    Ordering(&'static str),
    #[error("alpha must be positive and finite, got {0}")]
    Alpha(f64),
}

impl ThresholdConfig {
    /// Copy with `alpha` set; thresholds stay nominal.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..self.clone() }
    }

    /// Thresholds with every magnitude multiplied by `alpha` (negative
    /// accelerations grow in magnitude). The result has `alpha == 1`.
    pub fn scaled(&self) -> Self {
        let k = self.alpha;
        Self {
            turn_deadzone: self.turn_deadzone * k,
            brake_emergency: self.brake_emergency * k,
            brake_moderate: self.brake_moderate * k,
            brake_low: self.brake_low * k,
            speed_stopped: self.speed_stopped * k,
            speed_slow: self.speed_slow * k,
            speed_urban: self.speed_urban * k,
            jerk_smooth: self.jerk_smooth * k,
            jerk_moderate: self.jerk_moderate * k,
            trend_deadzone: self.trend_deadzone * k,
            lat_accel_high: self.lat_accel_high * k,
            heading_change_min: self.heading_change_min * k,
            extreme_jerk: self.extreme_jerk * k,
            extreme_accel: self.extreme_accel * k,
            stopgo_stop: self.stopgo_stop * k,
            stopgo_move: self.stopgo_move * k,
            btt_brake: self.btt_brake * k,
            btt_yaw: self.btt_yaw * k,
            mean_speed_low: self.mean_speed_low * k,
            peak_epsilon: self.peak_epsilon * k,
            contrastive_rel_band: self.contrastive_rel_band,
            contrastive_abs_band: self.contrastive_abs_band * k,
            heading_change_mode: self.heading_change_mode,
            stop_go_bidirectional: self.stop_go_bidirectional,
            alpha: 1.0,
        }
    }

    /// Named numeric fields, in declaration order.
    pub fn numeric_fields(&self) -> [(&'static str, f64); 23] {
        [
            ("turn_deadzone", self.turn_deadzone),
            ("brake_emergency", self.brake_emergency),
            ("brake_moderate", self.brake_moderate),
            ("brake_low", self.brake_low),
            ("speed_stopped", self.speed_stopped),
            ("speed_slow", self.speed_slow),
            ("speed_urban", self.speed_urban),
            ("jerk_smooth", self.jerk_smooth),
            ("jerk_moderate", self.jerk_moderate),
            ("trend_deadzone", self.trend_deadzone),
            ("lat_accel_high", self.lat_accel_high),
            ("heading_change_min", self.heading_change_min),
            ("extreme_jerk", self.extreme_jerk),
            ("extreme_accel", self.extreme_accel),
            ("stopgo_stop", self.stopgo_stop),
            ("stopgo_move", self.stopgo_move),
            ("btt_brake", self.btt_brake),
            ("btt_yaw", self.btt_yaw),
            ("mean_speed_low", self.mean_speed_low),
            ("peak_epsilon", self.peak_epsilon),
            ("contrastive_rel_band", self.contrastive_rel_band),
            ("contrastive_abs_band", self.contrastive_abs_band),
            ("alpha", self.alpha),
        ]
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in self.numeric_fields() {
            if !value.is_finite() {
                return Err(ConfigError::NonFinite(name));
            }
        }
        if self.alpha <= 0.0 {
            return Err(ConfigError::Alpha(self.alpha));
        }
        let checks = [
            (
                self.brake_emergency < self.brake_moderate
                    && self.brake_moderate < self.brake_low
                    && self.brake_low < 0.0,
                "brake_emergency < brake_moderate < brake_low < 0",
            ),
            (
                self.speed_stopped < self.speed_slow && self.speed_slow < self.speed_urban,
                "speed_stopped < speed_slow < speed_urban",
            ),
            (self.jerk_smooth < self.jerk_moderate, "jerk_smooth < jerk_moderate"),
            (self.stopgo_stop < self.stopgo_move, "stopgo_stop < stopgo_move"),
            (
                self.extreme_accel < 0.0 && self.btt_brake < 0.0,
                "extreme_accel and btt_brake are negative",
            ),
            (
                [
                    self.turn_deadzone,
                    self.speed_stopped,
                    self.jerk_smooth,
                    self.trend_deadzone,
                    self.lat_accel_high,
                    self.heading_change_min,
                    self.extreme_jerk,
                    self.stopgo_stop,
                    self.btt_yaw,
                    self.mean_speed_low,
                    self.peak_epsilon,
                    self.contrastive_rel_band,
                    self.contrastive_abs_band,
                ]
                .iter()
                .all(|v| *v > 0.0),
                "magnitude thresholds are positive",
            ),
        ];
        for (ok, what) in checks {
            if !ok {
                return Err(ConfigError::Ordering(what));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        ThresholdConfig::default().validate().unwrap();
    }

    #[test]
    fn scaling_keeps_orderings() {
        for alpha in [0.5, 0.75, 1.25, 1.5] {
            let s = ThresholdConfig::default().with_alpha(alpha).scaled();
            s.validate().unwrap();
            assert!((s.brake_emergency - -1.59 * alpha).abs() < 1e-12);
            assert_eq!(s.contrastive_rel_band, 0.15);
        }
    }

    #[test]
    fn rejects_bad_values() {
        let c = ThresholdConfig {
            brake_low: -2.0,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(ConfigError::Ordering(_))));
        let c = ThresholdConfig::default().with_alpha(0.0);
        assert_eq!(c.validate(), Err(ConfigError::Alpha(0.0)));
        let c = ThresholdConfig {
            speed_slow: f64::NAN,
            ..Default::default()
        };
        assert_eq!(c.validate(), Err(ConfigError::NonFinite("speed_slow")));
    }
}
