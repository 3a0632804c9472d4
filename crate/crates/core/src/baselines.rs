//! Heuristic answer functions for flow-style and odometry-style proxy
//! signals, restricted to the six questions they can answer.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::kinematics::StateSequence;
use crate::math;
use crate::oracle::{ordered_pair, yes_no, RuleResult};
use crate::question::{AnswerSet, Question};
use crate::stats::{max_of, mean};

/// Questions the baselines answer, in their output order.
pub const SUBSET: [Question; 6] = [
    Question::TurnDirection,
    Question::SpeedTrend,
    Question::LateralAccel,
    Question::HeadingChange,
    Question::StopAndGo,
    Question::BrakeThenTurn,
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BaselineError {
    #[error("proxy series is empty")]
    EmptySeries,
    #[error("proxy channel `{0}` has the wrong length")]
    ChannelLength(&'static str),
    #[error("proxy channel `{0}` holds a non-finite value")]
    NonFinite(&'static str),
    #[error("proxy channel `{0}` must be non-negative")]
    Negative(&'static str),
}

fn check(name: &'static str, values: &[f64], len: usize, non_negative: bool) -> Result<(), BaselineError> {
    if values.len() != len {
        return Err(BaselineError::ChannelLength(name));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(BaselineError::NonFinite(name));
    }
    if non_negative && values.iter().any(|v| *v < 0.0) {
        return Err(BaselineError::Negative(name));
    }
    Ok(())
}

/// Per-frame-pair turn score, expansion score and motion magnitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FlowChannels", into = "FlowChannels")]
pub struct FlowProxySeries(FlowChannels);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowChannels {
    pub t: Vec<f64>,
    pub s_turn: Vec<f64>,
    pub s_exp: Vec<f64>,
    pub m_mag: Vec<f64>,
}

impl FlowProxySeries {
    pub fn new(ch: FlowChannels) -> Result<Self, BaselineError> {
        let n = ch.t.len();
        if n == 0 {
            return Err(BaselineError::EmptySeries);
        }
        check("t", &ch.t, n, false)?;
        check("s_turn", &ch.s_turn, n, false)?;
        check("s_exp", &ch.s_exp, n, false)?;
        check("m_mag", &ch.m_mag, n, true)?;
        Ok(Self(ch))
    }

    pub fn channels(&self) -> &FlowChannels {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.t.is_empty()
    }
}

impl TryFrom<FlowChannels> for FlowProxySeries {
    type Error = BaselineError;
    fn try_from(ch: FlowChannels) -> Result<Self, Self::Error> {
        Self::new(ch)
    }
}

impl From<FlowProxySeries> for FlowChannels {
    fn from(s: FlowProxySeries) -> Self {
        s.0
    }
}

/// Per-frame-pair displacement magnitude and yaw in degrees (positive left).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OdomChannels", into = "OdomChannels")]
pub struct OdomProxySeries(OdomChannels);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdomChannels {
    pub t: Vec<f64>,
    pub m_disp: Vec<f64>,
    pub theta_deg: Vec<f64>,
}

impl OdomProxySeries {
    pub fn new(ch: OdomChannels) -> Result<Self, BaselineError> {
        let n = ch.t.len();
        if n == 0 {
            return Err(BaselineError::EmptySeries);
        }
        check("t", &ch.t, n, false)?;
        check("m_disp", &ch.m_disp, n, true)?;
        check("theta_deg", &ch.theta_deg, n, false)?;
        Ok(Self(ch))
    }

    pub fn channels(&self) -> &OdomChannels {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.t.is_empty()
    }
}

impl TryFrom<OdomChannels> for OdomProxySeries {
    type Error = BaselineError;
    fn try_from(ch: OdomChannels) -> Result<Self, Self::Error> {
        Self::new(ch)
    }
}

impl From<OdomProxySeries> for OdomChannels {
    fn from(s: OdomProxySeries) -> Self {
        s.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowThresholds {
    pub turn: f64,
    pub exp: f64,
    pub lat: f64,
    pub head: f64,
    pub stop: f64,
    pub moving: f64,
}

impl Default for FlowThresholds {
    fn default() -> Self {
        Self {
            turn: 0.05,
            exp: 0.2,
            lat: 1.5,
            head: 3.0,
            stop: 0.3,
            moving: 1.5,
        }
    }
}

/// Odometry thresholds; angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoThresholds {
    pub yaw: f64,
    pub peak: f64,
    pub stop: f64,
    pub moving: f64,
    pub trend: f64,
    pub head: f64,
    pub lat: f64,
    pub brake: f64,
}

impl VoThresholds {
    /// Sparse-feature odometry preset.
    pub fn classical() -> Self {
        Self {
            yaw: 0.03,
            peak: 0.15,
            stop: 0.5,
            moving: 2.0,
            trend: 0.3,
            head: 1.5,
            lat: 0.8,
            brake: 0.4,
        }
    }

    /// Preset for a learned odometry backend.
    pub fn learned() -> Self {
        Self {
            yaw: 0.5,
            peak: 1.0,
            stop: 0.15,
            moving: 0.5,
            trend: 0.05,
            head: 5.0,
            lat: 2.0,
            brake: 0.3,
        }
    }
}

impl Default for VoThresholds {
    fn default() -> Self {
        Self::classical()
    }
}

/// Minimum mean displacement before a braking drop is looked for.
pub const VO_BRAKE_MIN_DISP: f64 = 0.5;

/// Answers in [`SUBSET`] order, with the thresholds and evidence used.
pub fn flow_answers(series: &FlowProxySeries, th: &FlowThresholds) -> Vec<RuleResult> {
    let ch = series.channels();
    let turn_mean = mean(&ch.s_turn);
    let exp_mean = mean(&ch.s_exp);
    let abs_turn: Vec<f64> = ch.s_turn.iter().map(|s| math::abs(*s)).collect();
    let turn_peak = max_of(&abs_turn);
    let turn_sum: f64 = abs_turn.iter().sum();
    let stop_go = ordered_pair(&ch.m_mag, &ch.m_mag, |m| m < th.stop, |m| m > th.moving);
    let brake_turn = ordered_pair(&ch.s_exp, &abs_turn, |e| e < -th.exp, |s| s > th.turn);

    let turn = if turn_mean > th.turn {
        "left"
    } else if turn_mean < -th.turn {
        "right"
    } else {
        "straight"
    };
    let trend = if exp_mean > th.exp {
        "accelerating"
    } else if exp_mean < -th.exp {
        "decelerating"
    } else {
        "steady"
    };
    alloc::vec![
        RuleResult::new(Question::TurnDirection, turn, "flow_mean_turn_score")
            .param("tau_turn", th.turn)
            .evidence("mean_s_turn", turn_mean),
        RuleResult::new(Question::SpeedTrend, trend, "flow_mean_expansion")
            .param("tau_exp", th.exp)
            .evidence("mean_s_exp", exp_mean),
        RuleResult::new(
            Question::LateralAccel,
            yes_no(turn_peak > th.lat),
            "flow_peak_turn_score"
        )
        .param("tau_lat", th.lat)
        .evidence("max_abs_s_turn", turn_peak),
        RuleResult::new(
            Question::HeadingChange,
            yes_no(turn_sum > th.head),
            "flow_summed_turn_score"
        )
        .param("tau_head", th.head)
        .evidence("sum_abs_s_turn", turn_sum),
        RuleResult::new(
            Question::StopAndGo,
            yes_no(stop_go.is_some()),
            "flow_stop_move_sequence"
        )
        .param("tau_stop", th.stop)
        .param("tau_move", th.moving)
        .evidence("min_m_mag", crate::stats::min_of(&ch.m_mag))
        .evidence("max_m_mag", max_of(&ch.m_mag)),
        RuleResult::new(
            Question::BrakeThenTurn,
            yes_no(brake_turn.is_some()),
            "flow_brake_turn_sequence"
        )
        .param("tau_exp", th.exp)
        .param("tau_turn", th.turn)
        .evidence("min_s_exp", crate::stats::min_of(&ch.s_exp))
        .evidence("max_abs_s_turn", turn_peak),
    ]
}

/// Least-squares slope of `y` against `x`; zero when `x` is constant.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    sxy / sxx
}

/// Answers in [`SUBSET`] order, with the thresholds and evidence used.
pub fn vo_answers(series: &OdomProxySeries, th: &VoThresholds) -> Vec<RuleResult> {
    let ch = series.channels();
    let yaw_mean = mean(&ch.theta_deg);
    let abs_yaw: Vec<f64> = ch.theta_deg.iter().map(|s| math::abs(*s)).collect();
    let yaw_peak = max_of(&abs_yaw);
    let yaw_sum: f64 = abs_yaw.iter().sum();
    let slope = ols_slope(&ch.t, &ch.m_disp);
    let disp_mean = mean(&ch.m_disp);
    let stop_go = ordered_pair(&ch.m_disp, &ch.m_disp, |m| m < th.stop, |m| m > th.moving);

    let drop = th.brake * disp_mean;
    let brake_turn = disp_mean > VO_BRAKE_MIN_DISP
        && (1..ch.m_disp.len())
            .any(|t1| ch.m_disp[t1] < ch.m_disp[t1 - 1] - drop && abs_yaw[t1 + 1..].iter().any(|y| *y > th.yaw));

    let turn = if yaw_mean > th.yaw && yaw_peak > th.peak {
        "left"
    } else if yaw_mean < -th.yaw && yaw_peak > th.peak {
        "right"
    } else {
        "straight"
    };
    let trend = if slope > th.trend {
        "accelerating"
    } else if slope < -th.trend {
        "decelerating"
    } else {
        "steady"
    };
    alloc::vec![
        RuleResult::new(Question::TurnDirection, turn, "vo_mean_and_peak_yaw")
            .param("tau_yaw", th.yaw)
            .param("tau_peak", th.peak)
            .evidence("mean_theta_deg", yaw_mean)
            .evidence("peak_abs_theta_deg", yaw_peak),
        RuleResult::new(Question::SpeedTrend, trend, "vo_displacement_slope")
            .param("tau_trend", th.trend)
            .evidence("m_disp_slope", slope),
        RuleResult::new(Question::LateralAccel, yes_no(yaw_peak > th.lat), "vo_peak_yaw")
            .param("tau_lat", th.lat)
            .evidence("peak_abs_theta_deg", yaw_peak),
        RuleResult::new(Question::HeadingChange, yes_no(yaw_sum > th.head), "vo_summed_yaw")
            .param("tau_head", th.head)
            .evidence("sum_abs_theta_deg", yaw_sum),
        RuleResult::new(Question::StopAndGo, yes_no(stop_go.is_some()), "vo_stop_move_sequence")
            .param("tau_stop", th.stop)
            .param("tau_move", th.moving)
            .evidence("min_m_disp", crate::stats::min_of(&ch.m_disp))
            .evidence("max_m_disp", max_of(&ch.m_disp)),
        RuleResult::new(Question::BrakeThenTurn, yes_no(brake_turn), "vo_drop_then_yaw")
            .param("tau_brake", th.brake)
            .param("tau_yaw", th.yaw)
            .param("min_mean_disp", VO_BRAKE_MIN_DISP)
            .evidence("mean_m_disp", disp_mean)
            .evidence("brake_drop", drop),
    ]
}

/// Collects baseline results into an answer set (other questions unanswered).
pub fn to_answer_set(results: &[RuleResult]) -> AnswerSet {
    let mut set = AnswerSet::new();
    for r in results {
        set.set(r.question, r.answer);
    }
    set
}

/// Linear gains from kinematics to proxy units, and the noise reference
/// scale per channel.
///
/// Noise std on each proxy channel is `noise_level × gain × reference`, with
/// references 0.04 rad/s (ω), 0.25 m/s² (a) and 0.5 m/s (v).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxyGains {
    /// S_turn per rad/s.
    pub s_turn: f64,
    /// S_exp per m/s².
    pub s_exp: f64,
    /// M_mag per m/s.
    pub m_mag: f64,
    /// M_disp per m/s.
    pub m_disp: f64,
    /// Degrees of θ per rad/s.
    pub theta_deg: f64,
}

impl ProxyGains {
    /// Gains placing the flow turn and expansion thresholds and the
    /// classical odometry stop/move thresholds on the oracle's.
    pub fn classical() -> Self {
        Self {
            s_turn: 1.25,
            s_exp: 0.8,
            m_mag: 0.6,
            m_disp: 1.0,
            theta_deg: 0.75,
        }
    }

    /// Gains for the learned-odometry threshold preset.
    pub fn learned() -> Self {
        Self {
            m_disp: 0.3,
            theta_deg: 12.5,
            ..Self::classical()
        }
    }
}

impl Default for ProxyGains {
    fn default() -> Self {
        Self::classical()
    }
}

const NOISE_REF_OMEGA: f64 = 0.04;
const NOISE_REF_ACCEL: f64 = 0.25;
const NOISE_REF_SPEED: f64 = 0.5;

/// Proxy series from kinematics: one frame pair per state sample.
pub fn synth_proxies(
    seq: &StateSequence,
    gains: &ProxyGains,
    noise_level: f64,
    seed: u64,
) -> (FlowProxySeries, OdomProxySeries) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut channel = |values: &[f64], gain: f64, reference: f64, clamp: bool| -> Vec<f64> {
        let std = math::abs(noise_level * gain * reference);
        let normal = (std > 0.0).then(|| Normal::new(0.0, std).expect("finite std"));
        values
            .iter()
            .map(|x| {
                let mut y = gain * x;
                if let Some(n) = &normal {
                    y += n.sample(&mut rng);
                }
                if clamp {
                    math::max(y, 0.0)
                } else {
                    y
                }
            })
            .collect()
    };
    let t = seq.t().to_vec();
    let flow = FlowChannels {
        t: t.clone(),
        s_turn: channel(seq.omega(), gains.s_turn, NOISE_REF_OMEGA, false),
        s_exp: channel(seq.a(), gains.s_exp, NOISE_REF_ACCEL, false),
        m_mag: channel(seq.v(), gains.m_mag, NOISE_REF_SPEED, true),
    };
    let odom = OdomChannels {
        t,
        m_disp: channel(seq.v(), gains.m_disp, NOISE_REF_SPEED, true),
        theta_deg: channel(seq.omega(), gains.theta_deg, NOISE_REF_OMEGA, false),
    };
    (
        FlowProxySeries::new(flow).expect("valid sequence gives valid proxies"),
        OdomProxySeries::new(odom).expect("valid sequence gives valid proxies"),
    )
}

/// Scale factors a threshold is pushed through when checking margins.
const MARGIN_FACTORS: [f64; 3] = [0.5, 1.0, 2.0];

type Knob<T> = fn(&mut T, f64);

/// The answer `answer` gives under every combination of the knobs scaled by
/// ½, 1 and 2, or `None` if any combination disagrees.
fn stable_answer<T: Clone>(base: &T, knobs: &[Knob<T>], answer: impl Fn(&T) -> &'static str) -> Option<&'static str> {
    let combos = MARGIN_FACTORS.len().pow(knobs.len() as u32);
    let mut seen: Option<&'static str> = None;
    for mut code in 0..combos {
        let mut th = base.clone();
        for knob in knobs {
            knob(&mut th, MARGIN_FACTORS[code % MARGIN_FACTORS.len()]);
            code /= MARGIN_FACTORS.len();
        }
        let a = answer(&th);
        if seen.is_some_and(|s| s != a) {
            return None;
        }
        seen = Some(a);
    }
    seen
}

fn subset_index(q: Question) -> usize {
    SUBSET
        .iter()
        .position(|s| *s == q)
        .expect("question outside the baseline subset")
}

/// Flow answer to `q` if it holds with every relevant threshold halved or
/// doubled. Panics if `q` is not in [`SUBSET`].
pub fn flow_margin_answer(series: &FlowProxySeries, th: &FlowThresholds, q: Question) -> Option<&'static str> {
    let knobs: &[Knob<FlowThresholds>] = match q {
        Question::TurnDirection => &[|t, s| t.turn *= s],
        Question::SpeedTrend => &[|t, s| t.exp *= s],
        Question::LateralAccel => &[|t, s| t.lat *= s],
        Question::HeadingChange => &[|t, s| t.head *= s],
        Question::StopAndGo => &[|t, s| t.stop *= s, |t, s| t.moving *= s],
        Question::BrakeThenTurn => &[|t, s| t.exp *= s, |t, s| t.turn *= s],
        _ => &[],
    };
    let i = subset_index(q);
    stable_answer(th, knobs, |t| flow_answers(series, t)[i].answer)
}

/// Odometry counterpart of [`flow_margin_answer`].
pub fn vo_margin_answer(series: &OdomProxySeries, th: &VoThresholds, q: Question) -> Option<&'static str> {
    let knobs: &[Knob<VoThresholds>] = match q {
        Question::TurnDirection => &[|t, s| t.yaw *= s, |t, s| t.peak *= s],
        Question::SpeedTrend => &[|t, s| t.trend *= s],
        Question::LateralAccel => &[|t, s| t.lat *= s],
        Question::HeadingChange => &[|t, s| t.head *= s],
        Question::StopAndGo => &[|t, s| t.stop *= s, |t, s| t.moving *= s],
        Question::BrakeThenTurn => &[|t, s| t.brake *= s, |t, s| t.yaw *= s],
        _ => &[],
    };
    let i = subset_index(q);
    stable_answer(th, knobs, |t| vo_answers(series, t)[i].answer)
}

/// Oracle counterpart of [`flow_margin_answer`] for the subset questions.
pub fn oracle_margin_answer(
    seq: &StateSequence,
    summary: &crate::kinematics::KinematicSummary,
    cfg: &crate::oracle::ThresholdConfig,
    q: Question,
) -> Option<&'static str> {
    use crate::oracle::{self, ThresholdConfig};
    let knobs: &[Knob<ThresholdConfig>] = match q {
        Question::TurnDirection => &[|t, s| t.turn_deadzone *= s],
        Question::SpeedTrend => &[|t, s| t.trend_deadzone *= s],
        Question::LateralAccel => &[|t, s| t.lat_accel_high *= s],
        Question::HeadingChange => &[|t, s| t.heading_change_min *= s],
        Question::StopAndGo => &[|t, s| t.stopgo_stop *= s, |t, s| t.stopgo_move *= s],
        Question::BrakeThenTurn => &[|t, s| t.btt_brake *= s, |t, s| t.btt_yaw *= s],
        _ => &[],
    };
    subset_index(q);
    let rule = oracle::RULES[q.index()];
    stable_answer(cfg, knobs, |t| rule(seq, summary, t).answer)
}
