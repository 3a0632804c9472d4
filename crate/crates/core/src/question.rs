//! The fourteen question templates and their closed answer spaces.

use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One of the fourteen benchmark questions, in question-bank order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Question {
    TurnDirection,
    BrakingIntensity,
    SpeedRegime,
    DrivingSmoothness,
    SpeedTrend,
    MeanSpeed,
    HeadingChange,
    ExtremeManeuver,
    MotionAxis,
    LateralAccel,
    StopAndGo,
    BrakeThenTurn,
    SpeedPeakHalf,
    ContrastiveSeq,
}

const YES_NO: &[&str] = &["yes", "no"];

impl Question {
    pub const COUNT: usize = 14;

    pub const ALL: [Question; Question::COUNT] = [
        Question::TurnDirection,
        Question::BrakingIntensity,
        Question::SpeedRegime,
        Question::DrivingSmoothness,
        Question::SpeedTrend,
        Question::MeanSpeed,
        Question::HeadingChange,
        Question::ExtremeManeuver,
        Question::MotionAxis,
        Question::LateralAccel,
        Question::StopAndGo,
        Question::BrakeThenTurn,
        Question::SpeedPeakHalf,
        Question::ContrastiveSeq,
    ];

    /// Questions that ask about the ordering of events inside the clip.
    pub const TEMPORAL: [Question; 2] = [Question::SpeedPeakHalf, Question::ContrastiveSeq];

    pub fn id(self) -> &'static str {
        match self {
            Question::TurnDirection => "turn_direction",
            Question::BrakingIntensity => "braking_intensity",
            Question::SpeedRegime => "speed_regime",
            Question::DrivingSmoothness => "driving_smoothness",
            Question::SpeedTrend => "speed_trend",
            Question::MeanSpeed => "mean_speed",
            Question::HeadingChange => "heading_change",
            Question::ExtremeManeuver => "extreme_maneuver",
            Question::MotionAxis => "motion_axis",
            Question::LateralAccel => "lateral_accel",
            Question::StopAndGo => "stop_and_go",
            Question::BrakeThenTurn => "brake_then_turn",
            Question::SpeedPeakHalf => "speed_peak_half",
            Question::ContrastiveSeq => "contrastive_seq",
        }
    }

    pub fn from_id(id: &str) -> Option<Question> {
        Question::ALL.iter().copied().find(|q| q.id() == id)
    }

    /// Position in [`Question::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn text(self) -> &'static str {
        match self {
            Question::TurnDirection => "Is the vehicle turning left, right, or going straight?",
            Question::BrakingIntensity => "What is the intensity level of the vehicle's braking?",
            Question::SpeedRegime => "What is the vehicle's speed regime?",
            Question::DrivingSmoothness => "How smooth is the driving based on jerk?",
            Question::SpeedTrend => "Is the vehicle accelerating, decelerating, or maintaining steady speed?",
            Question::MeanSpeed => "Is the mean speed below 5 m/s (18 km/h)?",
            Question::HeadingChange => "Does the vehicle change heading by more than 15 degrees?",
            Question::ExtremeManeuver => "Does the vehicle perform an extreme maneuver (high jerk or hard braking)?",
            Question::MotionAxis => {
                "Is the vehicle's motion primarily longitudinal (speeding up/slowing down) or lateral (turning)?"
            }
            Question::LateralAccel => "Does the vehicle experience high lateral acceleration?",
            Question::StopAndGo => "Does the vehicle exhibit stop-and-go behavior?",
            Question::BrakeThenTurn => "Does the vehicle brake and then turn (sequential maneuver)?",
            Question::SpeedPeakHalf => "Does the maximum speed occur in the first or second half of the sequence?",
            Question::ContrastiveSeq => {
                "Comparing the first and second halves of the sequence, which half has more dynamic driving?"
            }
        }
    }

    /// Canonical lowercase labels, in a fixed order.
    pub fn answer_space(self) -> &'static [&'static str] {
        match self {
            Question::TurnDirection => &["left", "right", "straight"],
            Question::BrakingIntensity => &["emergency", "moderate", "low", "none"],
            Question::SpeedRegime => &["stopped", "slow", "urban", "highway"],
            Question::DrivingSmoothness => &["smooth", "moderate", "aggressive"],
            Question::SpeedTrend => &["accelerating", "decelerating", "steady"],
            Question::MotionAxis => &["longitudinal", "lateral", "none"],
            Question::SpeedPeakHalf => &["first_half", "second_half", "no_peak"],
            Question::ContrastiveSeq => &["first_half", "second_half", "similar"],
            Question::MeanSpeed
            | Question::HeadingChange
            | Question::ExtremeManeuver
            | Question::LateralAccel
            | Question::StopAndGo
            | Question::BrakeThenTurn => YES_NO,
        }
    }

    pub fn class_count(self) -> usize {
        self.answer_space().len()
    }

    pub fn class_of(self, label: &str) -> Option<usize> {
        self.answer_space().iter().position(|l| *l == label)
    }

    /// Canonical static label for a string, if it belongs to this question.
    pub fn canonical(self, label: &str) -> Option<&'static str> {
        self.class_of(label).map(|c| self.answer_space()[c])
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Error for an unrecognised question id.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown question id `{0}`")]
pub struct UnknownQuestion(pub alloc::string::String);

impl FromStr for Question {
    type Err = UnknownQuestion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Question::from_id(s).ok_or_else(|| UnknownQuestion(s.into()))
    }
}

impl Serialize for Question {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Question {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let id = <alloc::string::String as Deserialize>::deserialize(deserializer)?;
        Question::from_id(&id).ok_or_else(|| serde::de::Error::custom(UnknownQuestion(id)))
    }
}

/// One answer (or a missing answer) for each of the fourteen questions.
///
/// Missing answers model unparsed predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AnswerSet {
    classes: [Option<u8>; Question::COUNT],
}

impl AnswerSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a complete set from labels in [`Question::ALL`] order.
    ///
    /// Returns `None` if any label is outside its question's answer space.
    pub fn from_labels(labels: [&str; Question::COUNT]) -> Option<Self> {
        let mut set = Self::new();
        for (q, label) in Question::ALL.iter().zip(labels) {
            set.classes[q.index()] = Some(q.class_of(label)? as u8);
        }
        Some(set)
    }

    pub fn get(&self, q: Question) -> Option<&'static str> {
        self.class(q).map(|c| q.answer_space()[c])
    }

    pub fn class(&self, q: Question) -> Option<usize> {
        self.classes[q.index()].map(usize::from)
    }

    /// Sets the answer for `q`; returns `false` (and leaves the set untouched)
    /// when `label` is not in the answer space.
    pub fn set(&mut self, q: Question, label: &str) -> bool {
        match q.class_of(label) {
            Some(c) => {
                self.classes[q.index()] = Some(c as u8);
                true
            }
            None => false,
        }
    }

    pub fn set_class(&mut self, q: Question, class: Option<usize>) {
        debug_assert!(class.is_none_or(|c| c < q.class_count()));
        self.classes[q.index()] = class.map(|c| c as u8);
    }

    pub fn clear(&mut self, q: Question) {
        self.classes[q.index()] = None;
    }

    pub fn is_complete(&self) -> bool {
        self.classes.iter().all(Option::is_some)
    }

    /// `(question, label)` pairs for the answers present.
    pub fn iter(&self) -> impl Iterator<Item = (Question, &'static str)> + '_ {
        Question::ALL
            .iter()
            .filter_map(move |&q| self.get(q).map(|label| (q, label)))
    }
}

/// Serialized as a map from question id to label; missing answers are omitted.
impl Serialize for AnswerSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.iter().map(|(q, label)| (q.id(), label)))
    }
}

impl<'de> Deserialize<'de> for AnswerSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use alloc::collections::BTreeMap;
        use alloc::string::String;
        let map = BTreeMap::<Question, String>::deserialize(deserializer)?;
        let mut set = AnswerSet::new();
        for (q, label) in map {
            if !set.set(q, &label) {
                return Err(serde::de::Error::custom(alloc::format!(
                    "`{label}` is not an answer to {}",
                    q.id()
                )));
            }
        }
        Ok(set)
    }
}
