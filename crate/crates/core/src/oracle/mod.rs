//! The deterministic labeling oracle.
//!
//! Each rule reads a [`StateSequence`], its [`KinematicSummary`] and the
//! threshold set, and returns one answer together with the rule name, the
//! thresholds it applied and the kinematic evidence it looked at. Threshold
//! comparisons are strict in the direction of the rule's wording ("exceeds",
//! "below"), so a value sitting exactly on a boundary falls into the less
//! extreme class.

mod calibrate;
mod thresholds;

pub use calibrate::{calibrate_thresholds, CalibrationError};
pub use thresholds::{ConfigError, HeadingChangeMode, ThresholdConfig};

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::kinematics::{KinematicSummary, StateSequence};
use crate::math;
use crate::question::{AnswerSet, Question};
use crate::stats::{argmax_by, mean};

/// Output of one labeling rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleResult {
    pub question: Question,
    pub answer: &'static str,
    pub rule_name: &'static str,
    pub rule_params: BTreeMap<String, f64>,
    pub evidence: BTreeMap<String, f64>,
}

impl RuleResult {
    pub(crate) fn new(question: Question, answer: &'static str, rule_name: &'static str) -> Self {
        debug_assert!(question.class_of(answer).is_some());
        Self {
            question,
            answer,
            rule_name,
            rule_params: BTreeMap::new(),
            evidence: BTreeMap::new(),
        }
    }

    pub(crate) fn param(mut self, name: &str, value: f64) -> Self {
        self.rule_params.insert(name.to_string(), value);
        self
    }

    pub(crate) fn evidence(mut self, name: &str, value: f64) -> Self {
        self.evidence.insert(name.to_string(), value);
        self
    }

    pub fn into_record(self, clip_id: &str) -> QaRecord {
        QaRecord {
            clip_id: clip_id.to_string(),
            question_id: self.question,
            answer: self.answer.to_string(),
            rule_name: self.rule_name.to_string(),
            rule_params: self.rule_params,
            evidence: self.evidence,
        }
    }
}

/// A traceable question/answer pair for one clip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaRecord {
    pub clip_id: String,
    pub question_id: Question,
    pub answer: String,
    pub rule_name: String,
    pub rule_params: BTreeMap<String, f64>,
    pub evidence: BTreeMap<String, f64>,
}

impl QaRecord {
    /// Answer class index, if the answer is in the question's space.
    pub fn class(&self) -> Option<usize> {
        self.question_id.class_of(&self.answer)
    }
}

/// Collects per-clip records into answer sets, keyed by clip id.
///
/// Records with an answer outside the question's space are skipped.
pub fn answer_sets(records: &[QaRecord]) -> BTreeMap<String, AnswerSet> {
    let mut out: BTreeMap<String, AnswerSet> = BTreeMap::new();
    for r in records {
        out.entry(r.clip_id.clone()).or_default().set(r.question_id, &r.answer);
    }
    out
}

/// Turn direction from the signed yaw rate at the peak-|ω| sample.
pub fn label_turn_direction(seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let omega = seq.omega();
    let peak = omega[argmax_by(omega, math::abs)];
    let answer = if peak > cfg.turn_deadzone {
        "left"
    } else if peak < -cfg.turn_deadzone {
        "right"
    } else {
        "straight"
    };
    RuleResult::new(Question::TurnDirection, answer, "peak_signed_yaw_rate")
        .param("turn_deadzone", cfg.turn_deadzone)
        .evidence("yaw_rate_at_peak", peak)
        .evidence("max_abs_yaw_rate", summary.max_abs_yaw_rate)
}

pub fn label_braking_intensity(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let a = summary.min_accel;
    let answer = if a < cfg.brake_emergency {
        "emergency"
    } else if a < cfg.brake_moderate {
        "moderate"
    } else if a < cfg.brake_low {
        "low"
    } else {
        "none"
    };
    RuleResult::new(Question::BrakingIntensity, answer, "min_accel_buckets")
        .param("brake_emergency", cfg.brake_emergency)
        .param("brake_moderate", cfg.brake_moderate)
        .param("brake_low", cfg.brake_low)
        .evidence("min_accel", a)
}

pub fn label_speed_regime(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let v = summary.max_speed;
    let answer = if v < cfg.speed_stopped {
        "stopped"
    } else if v < cfg.speed_slow {
        "slow"
    } else if v < cfg.speed_urban {
        "urban"
    } else {
        "highway"
    };
    RuleResult::new(Question::SpeedRegime, answer, "max_speed_buckets")
        .param("speed_stopped", cfg.speed_stopped)
        .param("speed_slow", cfg.speed_slow)
        .param("speed_urban", cfg.speed_urban)
        .evidence("max_speed", v)
}

pub fn label_smoothness(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let j = summary.mean_abs_jerk;
    let answer = if j <= cfg.jerk_smooth {
        "smooth"
    } else if j <= cfg.jerk_moderate {
        "moderate"
    } else {
        "aggressive"
    };
    RuleResult::new(Question::DrivingSmoothness, answer, "mean_abs_jerk_buckets")
        .param("jerk_smooth", cfg.jerk_smooth)
        .param("jerk_moderate", cfg.jerk_moderate)
        .evidence("mean_abs_jerk", j)
}

pub fn label_speed_trend(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let a = summary.mean_accel;
    let answer = if a > cfg.trend_deadzone {
        "accelerating"
    } else if a < -cfg.trend_deadzone {
        "decelerating"
    } else {
        "steady"
    };
    RuleResult::new(Question::SpeedTrend, answer, "mean_accel_deadzone")
        .param("trend_deadzone", cfg.trend_deadzone)
        .evidence("mean_accel", a)
}

pub fn label_mean_speed_low(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let answer = yes_no(summary.mean_speed < cfg.mean_speed_low);
    RuleResult::new(Question::MeanSpeed, answer, "mean_speed_below")
        .param("mean_speed_low", cfg.mean_speed_low)
        .evidence("mean_speed", summary.mean_speed)
}

pub fn label_heading_change(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let (change, path_flag) = match cfg.heading_change_mode {
        HeadingChangeMode::Net => (summary.total_heading_change, 0.0),
        HeadingChangeMode::Path => (summary.path_heading_change, 1.0),
    };
    RuleResult::new(
        Question::HeadingChange,
        yes_no(change > cfg.heading_change_min),
        "heading_change_exceeds",
    )
    .param("heading_change_min", cfg.heading_change_min)
    .param("path_integrated", path_flag)
    .evidence("heading_change", change)
}

pub fn label_extreme_maneuver(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let extreme = summary.max_abs_jerk > cfg.extreme_jerk || summary.min_accel < cfg.extreme_accel;
    RuleResult::new(Question::ExtremeManeuver, yes_no(extreme), "extreme_jerk_or_accel")
        .param("extreme_jerk", cfg.extreme_jerk)
        .param("extreme_accel", cfg.extreme_accel)
        .evidence("max_abs_jerk", summary.max_abs_jerk)
        .evidence("min_accel", summary.min_accel)
}

pub fn label_lateral_accel(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    RuleResult::new(
        Question::LateralAccel,
        yes_no(summary.max_lat_accel > cfg.lat_accel_high),
        "lateral_accel_exceeds",
    )
    .param("lat_accel_high", cfg.lat_accel_high)
    .evidence("max_lat_accel", summary.max_lat_accel)
}

/// First index `k` with `later(x[k])` that follows an index `i < k` with `earlier(x[i])`.
pub(crate) fn ordered_pair<F, G>(xs: &[f64], ys: &[f64], earlier: F, later: G) -> Option<(usize, usize)>
where
    F: Fn(f64) -> bool,
    G: Fn(f64) -> bool,
{
    let mut first: Option<usize> = None;
    for k in 0..xs.len() {
        if let Some(i) = first {
            if later(ys[k]) {
                return Some((i, k));
            }
        }
        if first.is_none() && earlier(xs[k]) {
            first = Some(k);
        }
    }
    None
}

pub fn label_stop_and_go(seq: &StateSequence, _summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let v = seq.v();
    let stopped = |x: f64| x < cfg.stopgo_stop;
    let moving = |x: f64| x > cfg.stopgo_move;
    let mut hit = ordered_pair(v, v, stopped, moving);
    if hit.is_none() && cfg.stop_go_bidirectional {
        hit = ordered_pair(v, v, moving, stopped);
    }
    let mut r = RuleResult::new(Question::StopAndGo, yes_no(hit.is_some()), "stop_move_sequence")
        .param("stopgo_stop", cfg.stopgo_stop)
        .param("stopgo_move", cfg.stopgo_move)
        .param("bidirectional", if cfg.stop_go_bidirectional { 1.0 } else { 0.0 })
        .evidence("min_speed", crate::stats::min_of(v))
        .evidence("max_speed", crate::stats::max_of(v));
    if let Some((i, k)) = hit {
        r = r.evidence("first_time", seq.t()[i]).evidence("second_time", seq.t()[k]);
    }
    r
}

pub fn label_brake_then_turn(seq: &StateSequence, _summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let hit = ordered_pair(
        seq.a(),
        seq.omega(),
        |a| a < cfg.btt_brake,
        |w| math::abs(w) > cfg.btt_yaw,
    );
    let mut r = RuleResult::new(Question::BrakeThenTurn, yes_no(hit.is_some()), "brake_turn_sequence")
        .param("btt_brake", cfg.btt_brake)
        .param("btt_yaw", cfg.btt_yaw)
        .evidence("min_accel", crate::stats::min_of(seq.a()))
        .evidence("max_abs_yaw_rate", crate::stats::max_of(&abs_all(seq.omega())));
    if let Some((i, k)) = hit {
        r = r.evidence("brake_time", seq.t()[i]).evidence("turn_time", seq.t()[k]);
    }
    r
}

fn abs_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| math::abs(*x)).collect()
}

/// Longitudinal vs lateral dominance, each activity normalised by its own
/// threshold; ties go to longitudinal.
pub fn label_motion_axis(_seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let longitudinal = math::abs(summary.mean_accel) / cfg.trend_deadzone;
    let lateral = summary.max_lat_accel / cfg.lat_accel_high;
    let answer = if longitudinal < 1.0 && lateral < 1.0 {
        "none"
    } else if longitudinal >= lateral {
        "longitudinal"
    } else {
        "lateral"
    };
    RuleResult::new(Question::MotionAxis, answer, "normalised_axis_dominance")
        .param("trend_deadzone", cfg.trend_deadzone)
        .param("lat_accel_high", cfg.lat_accel_high)
        .param("engine_defined", 1.0)
        .evidence("longitudinal_activity", longitudinal)
        .evidence("lateral_activity", lateral)
}

pub fn label_speed_peak_half(seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let range = summary.max_speed - summary.min_speed;
    let peak = argmax_by(seq.v(), |v| v);
    let answer = if range < cfg.peak_epsilon {
        "no_peak"
    } else if peak <= seq.midpoint_index() {
        "first_half"
    } else {
        "second_half"
    };
    RuleResult::new(Question::SpeedPeakHalf, answer, "speed_peak_half")
        .param("peak_epsilon", cfg.peak_epsilon)
        .param("engine_defined", 1.0)
        .evidence("speed_range", range)
        .evidence("peak_time", seq.t()[peak])
        .evidence("midpoint_time", seq.t()[seq.midpoint_index()])
}

/// Mean |jerk| of the first half (up to and including the midpoint sample)
/// and of the second half.
pub fn half_dynamism(seq: &StateSequence) -> (f64, f64) {
    let j = abs_all(seq.j());
    let mid = seq.midpoint_index();
    (mean(&j[..=mid]), mean(&j[mid + 1..]))
}

pub fn label_contrastive_halves(seq: &StateSequence, _summary: &KinematicSummary, cfg: &ThresholdConfig) -> RuleResult {
    let cfg = cfg.scaled();
    let (first, second) = half_dynamism(seq);
    let band = math::max(
        cfg.contrastive_rel_band * math::max(first, second),
        cfg.contrastive_abs_band,
    );
    let answer = if math::abs(first - second) <= band {
        "similar"
    } else if first > second {
        "first_half"
    } else {
        "second_half"
    };
    RuleResult::new(Question::ContrastiveSeq, answer, "half_dynamism_contrast")
        .param("contrastive_rel_band", cfg.contrastive_rel_band)
        .param("contrastive_abs_band", cfg.contrastive_abs_band)
        .param("engine_defined", 1.0)
        .evidence("first_half_mean_abs_jerk", first)
        .evidence("second_half_mean_abs_jerk", second)
}

type Rule = fn(&StateSequence, &KinematicSummary, &ThresholdConfig) -> RuleResult;

/// Rules in question-bank order.
pub const RULES: [Rule; Question::COUNT] = [
    label_turn_direction,
    label_braking_intensity,
    label_speed_regime,
    label_smoothness,
    label_speed_trend,
    label_mean_speed_low,
    label_heading_change,
    label_extreme_maneuver,
    label_motion_axis,
    label_lateral_accel,
    label_stop_and_go,
    label_brake_then_turn,
    label_speed_peak_half,
    label_contrastive_halves,
];

/// Applies all fourteen rules.
pub fn label_all(
    clip_id: &str,
    seq: &StateSequence,
    summary: &KinematicSummary,
    cfg: &ThresholdConfig,
) -> Vec<QaRecord> {
    RULES
        .iter()
        .map(|rule| rule(seq, summary, cfg).into_record(clip_id))
        .collect()
}

/// The fourteen answers without traceability detail.
pub fn answer_set(seq: &StateSequence, summary: &KinematicSummary, cfg: &ThresholdConfig) -> AnswerSet {
    let mut set = AnswerSet::new();
    for rule in RULES {
        let r = rule(seq, summary, cfg);
        set.set(r.question, r.answer);
    }
    set
}

/// Binary stratification tags used to bin clips before balancing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratificationTags {
    pub has_turn: bool,
    pub has_braking: bool,
    pub has_aggressive: bool,
}

impl StratificationTags {
    /// One of eight kinematic bins, `0..8`.
    pub fn bin(&self) -> u8 {
        (self.has_turn as u8) | (self.has_braking as u8) << 1 | (self.has_aggressive as u8) << 2
    }
}

pub fn stratification_tags(
    seq: &StateSequence,
    summary: &KinematicSummary,
    cfg: &ThresholdConfig,
) -> StratificationTags {
    StratificationTags {
        has_turn: label_turn_direction(seq, summary, cfg).answer != "straight",
        has_braking: label_braking_intensity(seq, summary, cfg).answer != "none",
        has_aggressive: label_smoothness(seq, summary, cfg).answer == "aggressive"
            || label_extreme_maneuver(seq, summary, cfg).answer == "yes",
    }
}

pub(crate) fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
