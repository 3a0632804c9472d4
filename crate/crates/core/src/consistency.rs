//! Physical-consistency rules over a clip's answer set, WPCR and PCov.
//!
//! A rule `A ⇒ B` is triggered when its antecedent holds and violated when it
//! is triggered and the consequent fails. An unanswered antecedent leaves the
//! rule untriggered; an unanswered consequent under a true antecedent counts
//! as a violation.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::question::{AnswerSet, Question};

/// `question = label` or `question ≠ label`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub question: Question,
    pub label: String,
    #[serde(default)]
    pub negated: bool,
}

impl Condition {
    pub fn is(question: Question, label: &str) -> Self {
        Self {
            question,
            label: label.to_string(),
            negated: false,
        }
    }

    pub fn is_not(question: Question, label: &str) -> Self {
        Self {
            negated: true,
            ..Self::is(question, label)
        }
    }

    /// `None` when the question is unanswered.
    pub fn eval(&self, answers: &AnswerSet) -> Option<bool> {
        answers
            .get(self.question)
            .map(|got| (got == self.label) != self.negated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyRule {
    pub id: String,
    pub antecedent: Condition,
    pub consequent: Condition,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConsistencyError {
    #[error("no clips to aggregate")]
    EmptySet,
    #[error("rule table is empty")]
    EmptyTable,
    #[error("rule {rule}: `{label}` is not an answer to {question}")]
    UnknownLabel {
        rule: String,
        question: Question,
        label: String,
    },
}

/// An ordered, validated list of implication rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ConsistencyRule>", into = "Vec<ConsistencyRule>")]
pub struct RuleTable {
    rules: Vec<ConsistencyRule>,
}

impl RuleTable {
    pub fn new(rules: Vec<ConsistencyRule>) -> Result<Self, ConsistencyError> {
        if rules.is_empty() {
            return Err(ConsistencyError::EmptyTable);
        }
        for rule in &rules {
            for c in [&rule.antecedent, &rule.consequent] {
                if c.question.class_of(&c.label).is_none() {
                    return Err(ConsistencyError::UnknownLabel {
                        rule: rule.id.clone(),
                        question: c.question,
                        label: c.label.clone(),
                    });
                }
            }
        }
        Ok(Self { rules })
    }

    /// The ten hard rules R1..R10.
    pub fn standard() -> Self {
        use Question::*;
        let rule = |id: &str, antecedent, consequent| ConsistencyRule {
            id: id.to_string(),
            antecedent,
            consequent,
        };
        let rules = alloc::vec![
            rule(
                "R1",
                Condition::is(HeadingChange, "yes"),
                Condition::is_not(TurnDirection, "straight")
            ),
            rule(
                "R2",
                Condition::is(LateralAccel, "yes"),
                Condition::is_not(TurnDirection, "straight")
            ),
            rule(
                "R3",
                Condition::is(TurnDirection, "straight"),
                Condition::is(HeadingChange, "no")
            ),
            rule(
                "R4",
                Condition::is(TurnDirection, "straight"),
                Condition::is(LateralAccel, "no")
            ),
            rule(
                "R5",
                Condition::is(SpeedRegime, "highway"),
                Condition::is(MeanSpeed, "no")
            ),
            rule(
                "R6",
                Condition::is(SpeedRegime, "stopped"),
                Condition::is(MeanSpeed, "yes")
            ),
            rule(
                "R7",
                Condition::is(SpeedRegime, "stopped"),
                Condition::is_not(SpeedTrend, "accelerating")
            ),
            rule(
                "R8",
                Condition::is(BrakeThenTurn, "yes"),
                Condition::is_not(BrakingIntensity, "none")
            ),
            rule(
                "R9",
                Condition::is(BrakeThenTurn, "yes"),
                Condition::is_not(TurnDirection, "straight")
            ),
            rule(
                "R10",
                Condition::is(StopAndGo, "yes"),
                Condition::is_not(SpeedRegime, "stopped")
            ),
        ];
        Self { rules }
    }

    pub fn rules(&self) -> &[ConsistencyRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn evaluate(&self, answers: &AnswerSet) -> Vec<RuleOutcome> {
        self.rules
            .iter()
            .map(|rule| {
                let triggered = rule.antecedent.eval(answers) == Some(true);
                let violated = triggered && rule.consequent.eval(answers) != Some(true);
                RuleOutcome {
                    rule_id: rule.id.clone(),
                    triggered,
                    violated,
                }
            })
            .collect()
    }

    pub fn clip(&self, clip_id: &str, answers: &AnswerSet) -> ClipConsistency {
        ClipConsistency::from_outcomes(clip_id, &self.evaluate(answers), self.len())
    }
}

impl Default for RuleTable {
    fn default() -> Self {
        Self::standard()
    }
}

impl TryFrom<Vec<ConsistencyRule>> for RuleTable {
    type Error = ConsistencyError;

    fn try_from(rules: Vec<ConsistencyRule>) -> Result<Self, Self::Error> {
        Self::new(rules)
    }
}

impl From<RuleTable> for Vec<ConsistencyRule> {
    fn from(table: RuleTable) -> Self {
        table.rules
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub rule_id: String,
    pub triggered: bool,
    pub violated: bool,
}

/// Evaluates the standard rule table.
pub fn evaluate_rules(answers: &AnswerSet) -> Vec<RuleOutcome> {
    RuleTable::standard().evaluate(answers)
}

/// Per-clip rule detail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipConsistency {
    pub clip_id: String,
    pub triggered: Vec<String>,
    pub violated: Vec<String>,
    pub rule_count: usize,
    pub contribution: f64,
}

impl ClipConsistency {
    pub fn from_outcomes(clip_id: &str, outcomes: &[RuleOutcome], rule_count: usize) -> Self {
        let ids = |keep: fn(&RuleOutcome) -> bool| {
            outcomes
                .iter()
                .filter(|o| keep(o))
                .map(|o| o.rule_id.clone())
                .collect::<Vec<_>>()
        };
        let triggered = ids(|o| o.triggered);
        let violated = ids(|o| o.violated);
        let contribution = contribution(triggered.len(), violated.len(), rule_count);
        Self {
            clip_id: clip_id.to_string(),
            triggered,
            violated,
            rule_count,
            contribution,
        }
    }

    pub fn t_c(&self) -> usize {
        self.triggered.len()
    }

    pub fn v_c(&self) -> usize {
        self.violated.len()
    }

    /// Fraction of the table this clip triggers.
    pub fn coverage(&self) -> f64 {
        self.t_c() as f64 / self.rule_count as f64
    }
}

/// `T/|R|` for a triggered clip with no violations, zero otherwise.
pub fn contribution(triggered: usize, violated: usize, rule_count: usize) -> f64 {
    if violated == 0 && triggered > 0 {
        triggered as f64 / rule_count as f64
    } else {
        0.0
    }
}

pub fn wpcr(clips: &[ClipConsistency]) -> Result<f64, ConsistencyError> {
    mean_of(clips, |c| c.contribution)
}

pub fn pcov(clips: &[ClipConsistency]) -> Result<f64, ConsistencyError> {
    mean_of(clips, ClipConsistency::coverage)
}

fn mean_of(clips: &[ClipConsistency], f: impl Fn(&ClipConsistency) -> f64) -> Result<f64, ConsistencyError> {
    if clips.is_empty() {
        return Err(ConsistencyError::EmptySet);
    }
    Ok(clips.iter().map(f).sum::<f64>() / clips.len() as f64)
}
