//! Parametric 3-second maneuvers with closed-form kinematics.
//!
//! Every maneuver reduces to a [`Profile`]: an initial speed and
//! acceleration, piecewise-constant jerk segments and yaw-rate segments.
//! Speed, acceleration and heading follow by exact integration. Expected
//! labels come from a separate evaluation of the question rules on the
//! sampled profile, not from the oracle.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::kinematics::{StateChannels, StateSequence, DEFAULT_RATE_HZ, DEFAULT_WINDOW_S};
use crate::math::{self, PI};
use crate::oracle::ThresholdConfig;
use crate::question::{AnswerSet, Question};

/// Constant jerk over `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JerkSegment {
    pub start: f64,
    pub end: f64,
    pub jerk: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum YawSegment {
    /// Constant yaw rate over `[start, end)`.
    Constant { start: f64, end: f64, yaw_rate: f64 },
    /// One sine lobe `amplitude · sin(π (t − start) / duration)`.
    HalfSine { start: f64, duration: f64, amplitude: f64 },
}

impl YawSegment {
    fn rate(&self, t: f64) -> f64 {
        match *self {
            YawSegment::Constant { start, end, yaw_rate } => {
                if t >= start && t < end {
                    yaw_rate
                } else {
                    0.0
                }
            }
            YawSegment::HalfSine {
                start,
                duration,
                amplitude,
            } => {
                if t >= start && t < start + duration {
                    amplitude * math::sin(PI * (t - start) / duration)
                } else {
                    0.0
                }
            }
        }
    }

    /// ∫₀ᵗ rate.
    fn angle(&self, t: f64) -> f64 {
        match *self {
            YawSegment::Constant { start, end, yaw_rate } => yaw_rate * (t.clamp(start, end) - start),
            YawSegment::HalfSine {
                start,
                duration,
                amplitude,
            } => {
                let u = t.clamp(start, start + duration) - start;
                amplitude * duration / PI * (1.0 - math::cos(PI * u / duration))
            }
        }
    }
}

/// Closed-form longitudinal and yaw profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub initial_speed: f64,
    pub initial_accel: f64,
    pub jerk: Vec<JerkSegment>,
    pub yaw: Vec<YawSegment>,
}

impl Profile {
    pub fn jerk(&self, t: f64) -> f64 {
        self.jerk
            .iter()
            .filter(|s| t >= s.start && t < s.end)
            .map(|s| s.jerk)
            .sum()
    }

    pub fn accel(&self, t: f64) -> f64 {
        self.initial_accel
            + self
                .jerk
                .iter()
                .map(|s| s.jerk * (t.clamp(s.start, s.end) - s.start))
                .sum::<f64>()
    }

    pub fn speed(&self, t: f64) -> f64 {
        let ramps: f64 = self
            .jerk
            .iter()
            .map(|s| {
                let d = s.end - s.start;
                let area = if t <= s.start {
                    0.0
                } else if t < s.end {
                    (t - s.start) * (t - s.start) / 2.0
                } else {
                    d * d / 2.0 + d * (t - s.end)
                };
                s.jerk * area
            })
            .sum();
        self.initial_speed + self.initial_accel * t + ramps
    }

    pub fn yaw_rate(&self, t: f64) -> f64 {
        self.yaw.iter().map(|s| s.rate(t)).sum()
    }

    /// Heading relative to the start.
    pub fn heading(&self, t: f64) -> f64 {
        self.yaw.iter().map(|s| s.angle(t)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Maneuver {
    ConstantSpeed {
        speed: f64,
    },
    ConstantAccel {
        initial_speed: f64,
        accel: f64,
    },
    /// Deceleration ramped in over `ramp` seconds from `start`, then held.
    BrakeProfile {
        initial_speed: f64,
        decel: f64,
        start: f64,
        ramp: f64,
    },
    ArcTurn {
        speed: f64,
        yaw_rate: f64,
        start: f64,
    },
    /// Two opposite yaw lobes with equal area; the second is 1.25× longer
    /// and correspondingly lower, so the net heading change is zero.
    LaneChange {
        speed: f64,
        yaw_amplitude: f64,
        start: f64,
        lobe_duration: f64,
    },
    /// Creep below the stop threshold, then launch.
    StopAndGo {
        creep_speed: f64,
        launch: f64,
        accel: f64,
        ramp: f64,
    },
    BrakeThenTurn {
        initial_speed: f64,
        decel: f64,
        brake_start: f64,
        brake_duration: f64,
        ramp: f64,
        yaw_rate: f64,
        turn_start: f64,
    },
    /// Acceleration pulse: `+jerk` for half the duration, `−jerk` for the rest.
    JerkBurst {
        speed: f64,
        jerk: f64,
        start: f64,
        duration: f64,
    },
    Composite {
        #[serde(flatten)]
        profile: Profile,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManeuverKind {
    ConstantSpeed,
    ConstantAccel,
    BrakeProfile,
    ArcTurn,
    LaneChange,
    StopAndGo,
    BrakeThenTurn,
    JerkBurst,
    Composite,
}

impl ManeuverKind {
    pub const ALL: [ManeuverKind; 9] = [
        ManeuverKind::ConstantSpeed,
        ManeuverKind::ConstantAccel,
        ManeuverKind::BrakeProfile,
        ManeuverKind::ArcTurn,
        ManeuverKind::LaneChange,
        ManeuverKind::StopAndGo,
        ManeuverKind::BrakeThenTurn,
        ManeuverKind::JerkBurst,
        ManeuverKind::Composite,
    ];
}

impl Maneuver {
    pub fn kind(&self) -> ManeuverKind {
        match self {
            Maneuver::ConstantSpeed { .. } => ManeuverKind::ConstantSpeed,
            Maneuver::ConstantAccel { .. } => ManeuverKind::ConstantAccel,
            Maneuver::BrakeProfile { .. } => ManeuverKind::BrakeProfile,
            Maneuver::ArcTurn { .. } => ManeuverKind::ArcTurn,
            Maneuver::LaneChange { .. } => ManeuverKind::LaneChange,
            Maneuver::StopAndGo { .. } => ManeuverKind::StopAndGo,
            Maneuver::BrakeThenTurn { .. } => ManeuverKind::BrakeThenTurn,
            Maneuver::JerkBurst { .. } => ManeuverKind::JerkBurst,
            Maneuver::Composite { .. } => ManeuverKind::Composite,
        }
    }

    pub fn profile(&self) -> Profile {
        let cruise = |speed: f64| Profile {
            initial_speed: speed,
            initial_accel: 0.0,
            jerk: vec![],
            yaw: vec![],
        };
        let ramp_to = |start: f64, ramp: f64, accel: f64| JerkSegment {
            start,
            end: start + ramp,
            jerk: accel / ramp,
        };
        match *self {
            Maneuver::ConstantSpeed { speed } => cruise(speed),
            Maneuver::ConstantAccel { initial_speed, accel } => Profile {
                initial_accel: accel,
                ..cruise(initial_speed)
            },
            Maneuver::BrakeProfile {
                initial_speed,
                decel,
                start,
                ramp,
            } => Profile {
                jerk: vec![ramp_to(start, ramp, decel)],
                ..cruise(initial_speed)
            },
            Maneuver::ArcTurn { speed, yaw_rate, start } => Profile {
                yaw: vec![YawSegment::Constant {
                    start,
                    end: f64::INFINITY,
                    yaw_rate,
                }],
                ..cruise(speed)
            },
            Maneuver::LaneChange {
                speed,
                yaw_amplitude,
                start,
                lobe_duration,
            } => {
                let second = 1.25 * lobe_duration;
                Profile {
                    yaw: vec![
                        YawSegment::HalfSine {
                            start,
                            duration: lobe_duration,
                            amplitude: yaw_amplitude,
                        },
                        YawSegment::HalfSine {
                            start: start + lobe_duration,
                            duration: second,
                            amplitude: -yaw_amplitude * lobe_duration / second,
                        },
                    ],
                    ..cruise(speed)
                }
            }
            Maneuver::StopAndGo {
                creep_speed,
                launch,
                accel,
                ramp,
            } => Profile {
                jerk: vec![ramp_to(launch, ramp, accel)],
                ..cruise(creep_speed)
            },
            Maneuver::BrakeThenTurn {
                initial_speed,
                decel,
                brake_start,
                brake_duration,
                ramp,
                yaw_rate,
                turn_start,
            } => Profile {
                jerk: vec![
                    ramp_to(brake_start, ramp, decel),
                    ramp_to(brake_start + ramp + brake_duration, ramp, -decel),
                ],
                yaw: vec![YawSegment::Constant {
                    start: turn_start,
                    end: f64::INFINITY,
                    yaw_rate,
                }],
                ..cruise(initial_speed)
            },
            Maneuver::JerkBurst {
                speed,
                jerk,
                start,
                duration,
            } => {
                let mid = start + duration / 2.0;
                Profile {
                    jerk: vec![
                        JerkSegment { start, end: mid, jerk },
                        JerkSegment {
                            start: mid,
                            end: start + duration,
                            jerk: -jerk,
                        },
                    ],
                    ..cruise(speed)
                }
            }
            Maneuver::Composite { ref profile } => profile.clone(),
        }
    }
}

/// Gaussian noise std per channel, in channel units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseSpec {
    pub speed: f64,
    pub accel: f64,
    pub jerk: f64,
    pub yaw_rate: f64,
}

impl NoiseSpec {
    /// `fraction` of the minimum 20% margin around the smallest threshold of
    /// each channel (0.5 m/s, 0.18 m/s², 1.25 m/s³, 0.04 rad/s).
    pub fn of_margin(fraction: f64) -> Self {
        let m = 0.2 * fraction;
        Self {
            speed: m * 0.5,
            accel: m * 0.18,
            jerk: m * 1.25,
            yaw_rate: m * 0.04,
        }
    }

    fn is_zero(&self) -> bool {
        self.speed == 0.0 && self.accel == 0.0 && self.jerk == 0.0 && self.yaw_rate == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManeuverSpec {
    #[serde(flatten)]
    pub maneuver: Maneuver,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub noise: NoiseSpec,
    /// Skip the threshold-margin check (boundary fixtures).
    #[serde(default)]
    pub boundary: bool,
}

impl ManeuverSpec {
    pub fn new(maneuver: Maneuver) -> Self {
        Self {
            maneuver,
            seed: 0,
            noise: NoiseSpec::default(),
            boundary: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("implausible maneuver: {0}")]
    ImplausibleSpec(String),
    #[error("an expected label sits within 20% of a threshold")]
    InsufficientMargin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthClip {
    pub clip_id: String,
    pub spec: ManeuverSpec,
    pub sequence: StateSequence,
    pub expected: AnswerSet,
}

pub const MAX_SPEED: f64 = 45.0;
pub const MAX_ACCEL: f64 = 10.0;
pub const MAX_YAW_RATE: f64 = 1.0;
/// Relative distance every expected label keeps from its thresholds.
pub const LABEL_MARGIN: f64 = 1.2;

const SAMPLES: usize = 31;
const CHECK_STEPS: usize = 600;

fn grid_time(k: usize) -> f64 {
    k as f64 / DEFAULT_RATE_HZ
}

fn check_plausible(profile: &Profile) -> Result<(), SynthError> {
    let bad = |what: &str, t: f64, value: f64| Err(SynthError::ImplausibleSpec(format!("{what} = {value} at t = {t}")));
    let times = profile
        .jerk
        .iter()
        .flat_map(|s| [s.start, s.end])
        .chain(profile.yaw.iter().flat_map(|s| match *s {
            YawSegment::Constant { start, end, .. } => [start, if end.is_infinite() { start } else { end }],
            YawSegment::HalfSine { start, duration, .. } => [start, duration],
        }));
    for t in times {
        if !t.is_finite() {
            return bad("segment time", 0.0, t);
        }
    }
    for s in &profile.jerk {
        if s.end <= s.start {
            return bad("jerk segment length", s.start, s.end - s.start);
        }
    }
    for k in 0..=CHECK_STEPS {
        let t = DEFAULT_WINDOW_S * k as f64 / CHECK_STEPS as f64;
        let (v, a, w) = (profile.speed(t), profile.accel(t), profile.yaw_rate(t));
        if !(0.0..=MAX_SPEED).contains(&v) {
            return bad("speed", t, v);
        }
        if math::abs(a).is_nan() || math::abs(a) > MAX_ACCEL {
            return bad("acceleration", t, a);
        }
        if math::abs(w).is_nan() || math::abs(w) > MAX_YAW_RATE {
            return bad("yaw rate", t, w);
        }
    }
    Ok(())
}

/// Profile sampled on the 31-point grid.
struct Samples {
    v: Vec<f64>,
    a: Vec<f64>,
    j: Vec<f64>,
    w: Vec<f64>,
    heading_change: f64,
}

impl Samples {
    fn of(p: &Profile) -> Self {
        let at = |f: &dyn Fn(f64) -> f64| (0..SAMPLES).map(|k| f(grid_time(k))).collect::<Vec<_>>();
        Self {
            v: at(&|t| p.speed(t)),
            a: at(&|t| p.accel(t)),
            j: at(&|t| p.jerk(t)),
            w: at(&|t| p.yaw_rate(t)),
            heading_change: math::abs(p.heading(grid_time(SAMPLES - 1))),
        }
    }
}

fn avg(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn largest(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(f64::NEG_INFINITY, f64::max)
}

/// Labels implied by the sampled profile for threshold set `th` (already
/// scaled). Written against the question definitions, not the oracle.
fn expected_labels(s: &Samples, th: &ThresholdConfig) -> AnswerSet {
    let n = s.v.len();
    let mid = (n - 1) / 2;
    let abs_j: Vec<f64> = s.j.iter().map(|x| math::abs(*x)).collect();
    let min_a = -largest(s.a.iter().map(|a| -a));
    let max_v = largest(s.v.iter().copied());
    let min_v = -largest(s.v.iter().map(|v| -v));
    let mean_a = avg(&s.a);
    let mean_v = avg(&s.v);
    let mean_abs_j = avg(&abs_j);
    let lat = largest(s.v.iter().zip(&s.w).map(|(v, w)| math::abs(v * w)));

    let mut peak_w = 0.0f64;
    for w in &s.w {
        if math::abs(*w) > math::abs(peak_w) {
            peak_w = *w;
        }
    }
    let later = |first: &dyn Fn(usize) -> bool, second: &dyn Fn(usize) -> bool| {
        (0..n).any(|i| first(i) && (i + 1..n).any(second))
    };

    let pick = |cond: &[(bool, &'static str)], otherwise: &'static str| {
        cond.iter().find(|(c, _)| *c).map_or(otherwise, |(_, l)| *l)
    };
    let yes = |b: bool| if b { "yes" } else { "no" };

    let turn = pick(
        &[
            (peak_w > th.turn_deadzone, "left"),
            (peak_w < -th.turn_deadzone, "right"),
        ],
        "straight",
    );
    let braking = pick(
        &[
            (min_a < th.brake_emergency, "emergency"),
            (min_a < th.brake_moderate, "moderate"),
            (min_a < th.brake_low, "low"),
        ],
        "none",
    );
    let regime = pick(
        &[
            (max_v < th.speed_stopped, "stopped"),
            (max_v < th.speed_slow, "slow"),
            (max_v < th.speed_urban, "urban"),
        ],
        "highway",
    );
    let smooth = pick(
        &[
            (mean_abs_j <= th.jerk_smooth, "smooth"),
            (mean_abs_j <= th.jerk_moderate, "moderate"),
        ],
        "aggressive",
    );
    let trend = pick(
        &[
            (mean_a > th.trend_deadzone, "accelerating"),
            (mean_a < -th.trend_deadzone, "decelerating"),
        ],
        "steady",
    );
    let longitudinal = math::abs(mean_a) / th.trend_deadzone;
    let lateral = lat / th.lat_accel_high;
    let axis = pick(
        &[
            (longitudinal < 1.0 && lateral < 1.0, "none"),
            (longitudinal >= lateral, "longitudinal"),
        ],
        "lateral",
    );
    let argmax_v = (0..n).fold(0, |best, i| if s.v[i] > s.v[best] { i } else { best });
    let peak = pick(
        &[
            (max_v - min_v < th.peak_epsilon, "no_peak"),
            (argmax_v <= mid, "first_half"),
        ],
        "second_half",
    );
    let d1 = avg(&abs_j[..=mid]);
    let d2 = avg(&abs_j[mid + 1..]);
    let band = f64::max(th.contrastive_rel_band * f64::max(d1, d2), th.contrastive_abs_band);
    let contrast = pick(
        &[(math::abs(d1 - d2) <= band, "similar"), (d1 > d2, "first_half")],
        "second_half",
    );

    let labels = [
        turn,
        braking,
        regime,
        smooth,
        trend,
        yes(mean_v < th.mean_speed_low),
        yes(s.heading_change > th.heading_change_min),
        yes(largest(abs_j.iter().copied()) > th.extreme_jerk || min_a < th.extreme_accel),
        axis,
        yes(lat > th.lat_accel_high),
        yes(later(&|i| s.v[i] < th.stopgo_stop, &|k| s.v[k] > th.stopgo_move)),
        yes(later(&|i| s.a[i] < th.btt_brake, &|k| math::abs(s.w[k]) > th.btt_yaw)),
        peak,
        contrast,
    ];
    AnswerSet::from_labels(labels).expect("labels drawn from the answer spaces")
}

fn scaled_thresholds(factor: f64) -> ThresholdConfig {
    let mut th = ThresholdConfig::default().with_alpha(factor).scaled();
    th.contrastive_rel_band *= factor;
    th
}

/// Expected labels of a profile at nominal thresholds, and whether they
/// survive scaling every threshold by 1/1.2 and 1.2.
pub fn expected_with_margin(profile: &Profile) -> (AnswerSet, bool) {
    let s = Samples::of(profile);
    let nominal = expected_labels(&s, &scaled_thresholds(1.0));
    let stable = [1.0 / LABEL_MARGIN, LABEL_MARGIN]
        .iter()
        .all(|f| expected_labels(&s, &scaled_thresholds(*f)) == nominal);
    (nominal, stable)
}

/// Builds the clip for `spec`.
pub fn generate(clip_id: &str, spec: &ManeuverSpec) -> Result<SynthClip, SynthError> {
    let profile = spec.maneuver.profile();
    check_plausible(&profile)?;
    let (expected, stable) = expected_with_margin(&profile);
    if !stable && !spec.boundary {
        return Err(SynthError::InsufficientMargin);
    }

    let t: Vec<f64> = (0..SAMPLES).map(grid_time).collect();
    let mut channels = StateChannels {
        v: t.iter().map(|&t| profile.speed(t)).collect(),
        a: t.iter().map(|&t| profile.accel(t)).collect(),
        j: t.iter().map(|&t| profile.jerk(t)).collect(),
        omega: t.iter().map(|&t| profile.yaw_rate(t)).collect(),
        theta: t.iter().map(|&t| profile.heading(t)).collect(),
        x: None,
        y: None,
        t,
    };
    let (x, y) = integrate_positions(&profile);
    channels.x = Some(x);
    channels.y = Some(y);

    if !spec.noise.is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut perturb = |values: &mut Vec<f64>, std: f64| {
            if std > 0.0 {
                let normal = Normal::new(0.0, std).expect("finite std");
                for v in values.iter_mut() {
                    *v += normal.sample(&mut rng);
                }
            }
        };
        perturb(&mut channels.v, spec.noise.speed);
        perturb(&mut channels.a, spec.noise.accel);
        perturb(&mut channels.j, spec.noise.jerk);
        perturb(&mut channels.omega, spec.noise.yaw_rate);
        for v in &mut channels.v {
            *v = math::max(*v, 0.0);
        }
    }

    let sequence = StateSequence::new(channels).map_err(|e| SynthError::ImplausibleSpec(format!("{e}")))?;
    Ok(SynthClip {
        clip_id: clip_id.into(),
        spec: spec.clone(),
        sequence,
        expected,
    })
}

/// Positions by trapezoid integration on a fine sub-grid.
fn integrate_positions(p: &Profile) -> (Vec<f64>, Vec<f64>) {
    const SUB: usize = 50;
    let h = 1.0 / (DEFAULT_RATE_HZ * SUB as f64);
    let vel = |t: f64| {
        let (v, th) = (p.speed(t), p.heading(t));
        (v * math::cos(th), v * math::sin(th))
    };
    let (mut x, mut y) = (vec![0.0], vec![0.0]);
    let (mut px, mut py) = (0.0, 0.0);
    for k in 1..SAMPLES {
        let t0 = grid_time(k - 1);
        for s in 0..SUB {
            let a = t0 + s as f64 * h;
            let (ax, ay) = vel(a);
            let (bx, by) = vel(a + h);
            px += 0.5 * h * (ax + bx);
            py += 0.5 * h * (ay + by);
        }
        x.push(px);
        y.push(py);
    }
    (x, y)
}

/// Relative sampling weight per maneuver kind; missing kinds get zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeMix(pub BTreeMap<ManeuverKind, f64>);

impl Default for RegimeMix {
    fn default() -> Self {
        Self(ManeuverKind::ALL.iter().map(|k| (*k, 1.0)).collect())
    }
}

impl RegimeMix {
    /// Equal weights over `kinds`.
    pub fn only(kinds: &[ManeuverKind]) -> Self {
        Self(kinds.iter().map(|k| (*k, 1.0)).collect())
    }

    fn pick(&self, rng: &mut ChaCha8Rng) -> Option<ManeuverKind> {
        let total: f64 = self.0.values().filter(|w| **w > 0.0).sum();
        if total <= 0.0 {
            return None;
        }
        let mut r = rng.random_range(0.0..total);
        for (kind, w) in self.0.iter().filter(|(_, w)| **w > 0.0) {
            if r < *w {
                return Some(*kind);
            }
            r -= w;
        }
        self.0.keys().next_back().copied()
    }
}

/// Event times land half-way between grid samples.
fn event_time(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let k = rng.random_range(math::round(lo * 10.0) as i64..=math::round(hi * 10.0) as i64);
    k as f64 / 10.0 + 0.05
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.random_range(lo..hi);
    if rng.random_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Deceleration drawn per braking class so the narrow bands get their share.
fn sample_decel(rng: &mut ChaCha8Rng) -> f64 {
    -match rng.random_range(0..3) {
        0 => rng.random_range(0.25..0.7),
        1 => rng.random_range(1.1..1.3),
        _ => rng.random_range(2.0..5.5),
    }
}

fn sample_maneuver(kind: ManeuverKind, rng: &mut ChaCha8Rng) -> Maneuver {
    match kind {
        ManeuverKind::ConstantSpeed => {
            let speed = match rng.random_range(0..4) {
                0 => rng.random_range(0.0..0.35),
                1 => rng.random_range(0.7..4.0),
                2 => rng.random_range(6.0..11.0),
                _ => rng.random_range(17.0..32.0),
            };
            Maneuver::ConstantSpeed { speed }
        }
        ManeuverKind::ConstantAccel => {
            let accel = if rng.random_bool(0.5) {
                rng.random_range(0.4..3.0)
            } else {
                sample_decel(rng)
            };
            let initial_speed = if accel < 0.0 {
                rng.random_range(-accel * 3.0 + 1.0..-accel * 3.0 + 15.0)
            } else {
                rng.random_range(0.7..20.0)
            };
            Maneuver::ConstantAccel { initial_speed, accel }
        }
        ManeuverKind::BrakeProfile => {
            let decel = sample_decel(rng);
            let start = event_time(rng, 0.2, 1.2);
            let ramp = rng.random_range(2..6) as f64 / 10.0;
            let initial_speed = -decel * (3.0 - start) + rng.random_range(1.0..15.0);
            Maneuver::BrakeProfile {
                initial_speed,
                decel,
                start,
                ramp,
            }
        }
        ManeuverKind::ArcTurn => Maneuver::ArcTurn {
            speed: rng.random_range(2.0..20.0),
            yaw_rate: signed(rng, 0.06, 0.6),
            start: if rng.random_bool(0.5) {
                0.0
            } else {
                event_time(rng, 0.2, 1.5)
            },
        },
        ManeuverKind::LaneChange => Maneuver::LaneChange {
            speed: rng.random_range(6.0..25.0),
            yaw_amplitude: signed(rng, 0.06, 0.3),
            start: event_time(rng, 0.0, 0.6),
            lobe_duration: rng.random_range(6..=10) as f64 / 10.0,
        },
        ManeuverKind::StopAndGo => Maneuver::StopAndGo {
            creep_speed: rng.random_range(0.0..0.35),
            launch: event_time(rng, 0.1, 1.0),
            accel: rng.random_range(1.8..3.5),
            ramp: rng.random_range(2..5) as f64 / 10.0,
        },
        ManeuverKind::BrakeThenTurn => {
            let decel = -rng.random_range(1.9..4.5);
            let brake_start = event_time(rng, 0.1, 0.7);
            let ramp = 0.3;
            let brake_duration = rng.random_range(3..8) as f64 / 10.0;
            let turn_start = event_time(rng, brake_start + ramp + 0.3, 2.4);
            Maneuver::BrakeThenTurn {
                initial_speed: -decel * (brake_duration + ramp) + rng.random_range(2.0..12.0),
                decel,
                brake_start,
                brake_duration,
                ramp,
                yaw_rate: signed(rng, 0.15, 0.5),
                turn_start,
            }
        }
        ManeuverKind::JerkBurst => {
            let duration = rng.random_range(2..9) as f64 / 10.0;
            let jerk = signed(rng, 4.0, 45.0);
            let jerk = jerk.clamp(-2.0 * MAX_ACCEL / duration * 0.95, 2.0 * MAX_ACCEL / duration * 0.95);
            Maneuver::JerkBurst {
                speed: rng.random_range(6.0..25.0),
                jerk,
                start: event_time(rng, 0.0, 2.9 - duration),
                duration,
            }
        }
        ManeuverKind::Composite => Maneuver::Composite {
            profile: sample_composite(rng),
        },
    }
}

/// Oscillating jerk over one or both halves, optionally with a turn.
fn sample_composite(rng: &mut ChaCha8Rng) -> Profile {
    let half_period = rng.random_range(2..=4) as f64 / 10.0;
    let jerk = rng.random_range(2.0..9.0);
    let (from, to) = match rng.random_range(0..3) {
        0 => (0.0, 3.1),
        1 => (0.0, 1.5),
        _ => (1.6, 3.1),
    };
    let mut segments = Vec::new();
    let mut t = from;
    let mut sign = 1.0;
    // +j, −j, −j, +j keeps the acceleration bounded and zero-mean
    while t + 4.0 * half_period <= to + 1e-9 {
        for s in [1.0, -1.0, -1.0, 1.0] {
            segments.push(JerkSegment {
                start: t,
                end: t + half_period,
                jerk: sign * s * jerk,
            });
            t += half_period;
        }
        sign = -sign;
    }
    let yaw = if rng.random_bool(0.5) {
        vec![YawSegment::Constant {
            start: event_time(rng, 0.0, 1.5),
            end: f64::INFINITY,
            yaw_rate: signed(rng, 0.06, 0.5),
        }]
    } else {
        vec![]
    };
    Profile {
        initial_speed: rng.random_range(3.0..25.0),
        initial_accel: 0.0,
        jerk: segments,
        yaw,
    }
}

fn clip_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 step so neighbouring clips get unrelated streams
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Attempts per clip before giving up on a kind's parameter range.
const MAX_ATTEMPTS: usize = 200;

/// Maneuver for clip `index` of a suite, drawn until it is plausible and
/// clear of every threshold margin.
pub fn suite_spec(seed: u64, index: usize, mix: &RegimeMix) -> Option<ManeuverSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(clip_seed(seed, index));
    let kind = mix.pick(&mut rng)?;
    for _ in 0..MAX_ATTEMPTS {
        let maneuver = sample_maneuver(kind, &mut rng);
        let spec = ManeuverSpec {
            maneuver,
            seed: rng.random(),
            noise: NoiseSpec::default(),
            boundary: false,
        };
        let profile = spec.maneuver.profile();
        if check_plausible(&profile).is_ok() && expected_with_margin(&profile).1 {
            return Some(spec);
        }
    }
    None
}

/// A seeded suite of `count` clips with ids `synth_0000`, `synth_0001`, ...
pub fn generate_suite(count: usize, seed: u64, mix: &RegimeMix) -> Result<Vec<SynthClip>, SynthError> {
    (0..count)
        .map(|i| {
            let spec = suite_spec(seed, i, mix).ok_or(SynthError::InsufficientMargin)?;
            generate(&suite_clip_id(i), &spec)
        })
        .collect()
}

pub fn suite_clip_id(index: usize) -> String {
    format!("synth_{index:04}")
}

/// Number of clips per (question, class), indexed like the answer space.
pub fn coverage(clips: &[SynthClip]) -> BTreeMap<Question, Vec<usize>> {
    let mut out: BTreeMap<Question, Vec<usize>> =
        Question::ALL.iter().map(|q| (*q, vec![0; q.class_count()])).collect();
    for clip in clips {
        for q in Question::ALL {
            if let Some(c) = clip.expected.class(q) {
                out.get_mut(&q).expect("all questions")[c] += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::summarize;
    use crate::oracle::answer_set;

    fn labels(set: &AnswerSet) -> Vec<&'static str> {
        Question::ALL.iter().map(|q| set.get(*q).unwrap()).collect()
    }

    fn gen(m: Maneuver) -> SynthClip {
        generate("c", &ManeuverSpec::new(m)).unwrap()
    }

    #[test]
    fn constant_speed() {
        let c = gen(Maneuver::ConstantSpeed { speed: 10.0 });
        assert_eq!(
            labels(&c.expected),
            [
                "straight", "none", "urban", "smooth", "steady", "no", "no", "no", "none", "no", "no", "no", "no_peak",
                "similar"
            ]
        );
    }

    #[test]
    fn brake_profile() {
        let c = gen(Maneuver::BrakeProfile {
            initial_speed: 10.0,
            decel: -2.0,
            start: 1.0,
            ramp: 0.3,
        });
        assert_eq!(c.expected.get(Question::BrakingIntensity), Some("emergency"));
        assert_eq!(c.expected.get(Question::SpeedTrend), Some("decelerating"));
    }

    #[test]
    fn arc_turn() {
        let c = gen(Maneuver::ArcTurn {
            speed: 10.0,
            yaw_rate: 0.25,
            start: 0.0,
        });
        assert_eq!(c.expected.get(Question::TurnDirection), Some("left"));
        assert_eq!(c.expected.get(Question::LateralAccel), Some("yes"));
        assert_eq!(c.expected.get(Question::HeadingChange), Some("yes"));
        assert!((c.sequence.theta()[30] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_agree_with_numeric_integration() {
        let p = Maneuver::BrakeThenTurn {
            initial_speed: 12.0,
            decel: -3.0,
            brake_start: 0.35,
            brake_duration: 0.5,
            ramp: 0.3,
            yaw_rate: 0.3,
            turn_start: 1.75,
        }
        .profile();
        let h = 1e-4;
        let (mut v, mut a, mut th) = (p.initial_speed, p.initial_accel, 0.0);
        let mut t = 0.0;
        while t < 3.0 - h / 2.0 {
            v += h * (p.accel(t) + p.accel(t + h)) / 2.0;
            a += h * p.jerk(t + h / 2.0);
            th += h * (p.yaw_rate(t) + p.yaw_rate(t + h)) / 2.0;
            t += h;
        }
        assert!((v - p.speed(3.0)).abs() < 1e-6);
        assert!((a - p.accel(3.0)).abs() < 1e-6);
        assert!((th - p.heading(3.0)).abs() < 1e-3);

        let lc = Maneuver::LaneChange {
            speed: 10.0,
            yaw_amplitude: 0.2,
            start: 0.25,
            lobe_duration: 0.8,
        }
        .profile();
        assert!(lc.heading(3.0).abs() < 1e-12);
    }

    #[test]
    fn implausible_and_boundary_specs() {
        let e = generate(
            "c",
            &ManeuverSpec::new(Maneuver::ConstantAccel {
                initial_speed: 1.0,
                accel: -2.0,
            }),
        );
        assert!(matches!(e, Err(SynthError::ImplausibleSpec(_))));
        let e = generate(
            "c",
            &ManeuverSpec::new(Maneuver::ArcTurn {
                speed: 10.0,
                yaw_rate: 1.5,
                start: 0.0,
            }),
        );
        assert!(matches!(e, Err(SynthError::ImplausibleSpec(_))));

        // mean speed right at 5 m/s
        let on_edge = ManeuverSpec::new(Maneuver::ConstantSpeed { speed: 5.0 });
        assert_eq!(generate("c", &on_edge).unwrap_err(), SynthError::InsufficientMargin);
        let boundary = ManeuverSpec {
            boundary: true,
            ..on_edge
        };
        assert_eq!(
            generate("c", &boundary).unwrap().expected.get(Question::MeanSpeed),
            Some("no")
        );
    }

    #[test]
    fn suite_is_reproducible_and_covers_every_class() {
        let a = generate_suite(100, 11, &RegimeMix::default()).unwrap();
        let b = generate_suite(100, 11, &RegimeMix::default()).unwrap();
        assert_eq!(a, b);
        for (q, counts) in coverage(&a) {
            for (c, n) in counts.iter().enumerate() {
                assert!(*n >= 1, "{q} class {} never generated", q.answer_space()[c]);
            }
        }
    }

    #[test]
    fn oracle_matches_expected_at_zero_noise() {
        let cfg = ThresholdConfig::default();
        for clip in generate_suite(60, 3, &RegimeMix::default()).unwrap() {
            let got = answer_set(&clip.sequence, &summarize(&clip.sequence), &cfg);
            assert_eq!(labels(&got), labels(&clip.expected), "{:?}", clip.spec);
        }
    }

    #[test]
    fn spec_round_trips() {
        let spec = suite_spec(5, 0, &RegimeMix::only(&[ManeuverKind::Composite])).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<ManeuverSpec>(&json).unwrap(), spec);
        let spec = suite_spec(5, 1, &RegimeMix::only(&[ManeuverKind::LaneChange])).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<ManeuverSpec>(&json).unwrap(), spec);
    }

    #[test]
    fn oracle_tolerates_small_noise() {
        let cfg = ThresholdConfig::default();
        let n = 200;
        let agree = (0..n)
            .filter(|i| {
                let mut spec = suite_spec(9, *i, &RegimeMix::default()).unwrap();
                spec.noise = NoiseSpec::of_margin(0.1);
                let clip = generate("c", &spec).unwrap();
                answer_set(&clip.sequence, &summarize(&clip.sequence), &cfg) == clip.expected
            })
            .count();
        assert!(agree as f64 >= 0.95 * n as f64, "{agree}/{n}");
    }

    proptest::proptest! {
        #[test]
        fn suite_specs_are_plausible_and_stable(seed in proptest::prelude::any::<u64>(), i in 0usize..1000) {
            let spec = suite_spec(seed, i, &RegimeMix::default()).unwrap();
            let clip = generate("c", &spec).unwrap();
            proptest::prop_assert!(clip.expected.is_complete());
            let seq = &clip.sequence;
            proptest::prop_assert!(seq.v().iter().all(|v| (0.0..=MAX_SPEED).contains(v)));
            proptest::prop_assert!(seq.omega().iter().all(|w| w.abs() <= MAX_YAW_RATE));
            proptest::prop_assert_eq!(seq.len(), 31);
        }
    }
}
