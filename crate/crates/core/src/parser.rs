//! Deterministic cascade from free-text model output to a closed label.
//!
//! After trimming and lowercasing, the stages are:
//!
//! 1. exact equality with a label;
//! 2. equality after mapping every run of non-alphanumeric characters to `_`;
//! 3. stages 1 and 2 on the last non-empty line;
//! 4. whole-word search for labels on the last line, `_` and spaces being
//!    interchangeable, accepted only when exactly one distinct label occurs.
//!
//! Anything else is unparsed.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::question::Question;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseStage {
    Exact,
    Underscore,
    LastLine,
    Substring,
    None,
}

impl ParseStage {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseStage::Exact => "exact",
            ParseStage::Underscore => "underscore",
            ParseStage::LastLine => "last_line",
            ParseStage::Substring => "substring",
            ParseStage::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseResult {
    /// `None` when unparsed.
    pub label: Option<String>,
    pub stage: ParseStage,
    pub raw: String,
}

impl ParseResult {
    pub fn is_parsed(&self) -> bool {
        self.label.is_some()
    }
}

/// Lowercase alphanumeric words of `text`; everything else separates.
fn words(text: &str) -> Vec<&str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect()
}

fn underscored(text: &str) -> String {
    words(text).join("_")
}

fn whole_match<'a>(text: &str, space: &[&'a str]) -> Option<(&'a str, ParseStage)> {
    if let Some(label) = space.iter().find(|l| **l == text) {
        return Some((label, ParseStage::Exact));
    }
    let norm = underscored(text);
    space
        .iter()
        .find(|l| underscored(l) == norm)
        .map(|l| (*l, ParseStage::Underscore))
}

/// Word-boundary search. Matches lying inside a longer label's match are
/// dropped before counting distinct labels.
fn word_match<'a>(line: &str, space: &[&'a str]) -> Option<&'a str> {
    let tokens = words(line);
    let mut spans: Vec<(usize, usize, &'a str)> = Vec::new();
    for label in space {
        let pattern = words(label);
        if pattern.is_empty() || pattern.len() > tokens.len() {
            continue;
        }
        for start in 0..=tokens.len() - pattern.len() {
            if tokens[start..start + pattern.len()] == pattern[..] {
                spans.push((start, start + pattern.len(), label));
            }
        }
    }
    let kept: Vec<&str> = spans
        .iter()
        .filter(|(s, e, l)| {
            !spans
                .iter()
                .any(|(s2, e2, l2)| l2 != l && s2 <= s && e <= e2 && e2 - s2 > e - s)
        })
        .map(|(_, _, l)| *l)
        .collect();
    match kept.split_first() {
        Some((first, rest)) if rest.iter().all(|l| l == first) => Some(first),
        _ => None,
    }
}

/// Runs the cascade. `answer_space` holds lowercase canonical labels.
pub fn parse(raw: &str, answer_space: &[&str]) -> ParseResult {
    let text = raw.trim().to_lowercase();
    let found = whole_match(&text, answer_space).or_else(|| {
        let last = text.lines().map(str::trim).rfind(|l| !l.is_empty())?;
        whole_match(last, answer_space)
            .map(|(label, _)| (label, ParseStage::LastLine))
            .or_else(|| word_match(last, answer_space).map(|l| (l, ParseStage::Substring)))
    });
    match found {
        Some((label, stage)) => ParseResult {
            label: Some(label.to_string()),
            stage,
            raw: raw.to_string(),
        },
        None => ParseResult {
            label: None,
            stage: ParseStage::None,
            raw: raw.to_string(),
        },
    }
}

/// [`parse`] against a question's answer space, returning the class index.
pub fn parse_class(raw: &str, question: Question) -> (Option<usize>, ParseStage) {
    let r = parse(raw, question.answer_space());
    (r.label.and_then(|l| question.class_of(&l)), r.stage)
}

/// Fraction of results that parsed; zero for an empty input.
pub fn parsable_rate<'a>(results: impl IntoIterator<Item = &'a ParseResult>) -> f64 {
    let (mut parsed, mut total) = (0usize, 0usize);
    for r in results {
        total += 1;
        parsed += r.is_parsed() as usize;
    }
    if total == 0 {
        0.0
    } else {
        parsed as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PEAK: &[&str] = &["first_half", "second_half", "no_peak"];
    const YES_NO: &[&str] = &["yes", "no"];
    const TREND: &[&str] = &["accelerating", "decelerating", "steady"];

    fn check(raw: &str, space: &[&str], label: Option<&str>, stage: ParseStage) {
        let r = parse(raw, space);
        assert_eq!((r.label.as_deref(), r.stage), (label, stage), "raw = {raw:?}");
    }

    #[test]
    fn quoted_examples() {
        check("first half", PEAK, Some("first_half"), ParseStage::Underscore);
        check("The answer is: yes", YES_NO, Some("yes"), ParseStage::Substring);
        check("left", &["left", "right", "straight"], Some("left"), ParseStage::Exact);
    }

    #[test]
    fn chain_of_thought() {
        let raw = "The speed drops from 9 to 4 m/s.\nThat is clearly braking.\n\nTherefore: decelerating.";
        check(raw, TREND, Some("decelerating"), ParseStage::Substring);
        check(
            "Reasoning...\n  Steady  \n",
            TREND,
            Some("steady"),
            ParseStage::LastLine,
        );
    }

    #[test]
    fn ambiguity_and_truncation() {
        check("yes or no, hard to say", YES_NO, None, ParseStage::None);
        check("The vehicle first", PEAK, None, ParseStage::None);
        check("", YES_NO, None, ParseStage::None);
        // repeated mention of one label is still one distinct label
        check("yes, yes.", YES_NO, Some("yes"), ParseStage::Substring);
    }

    #[test]
    fn contained_labels_are_dropped() {
        check(
            "it is no_peak",
            &["no", "no_peak"],
            Some("no_peak"),
            ParseStage::Substring,
        );
        check("no peak, no", &["no", "no_peak"], None, ParseStage::None);
    }

    #[test]
    fn word_boundaries() {
        check("nothing notable", YES_NO, None, ParseStage::None);
        check("Answer: SECOND-HALF!", PEAK, Some("second_half"), ParseStage::Substring);
    }

    #[test]
    fn rate() {
        let results: Vec<_> = ["yes", "maybe", "no", "no"].iter().map(|r| parse(r, YES_NO)).collect();
        assert_eq!(parsable_rate(&results), 0.75);
        assert_eq!(parsable_rate(&[]), 0.0);
    }

    proptest! {
        #[test]
        fn labels_parse_to_themselves(q in 0usize..Question::COUNT) {
            let q = Question::ALL[q];
            for label in q.answer_space() {
                let r = parse(label, q.answer_space());
                prop_assert_eq!(r.label.as_deref(), Some(*label));
                prop_assert_eq!(r.stage, ParseStage::Exact);
            }
        }

        #[test]
        fn case_insensitive(raw in "[a-zA-Z _:\n.]{0,40}", q in 0usize..Question::COUNT) {
            let space = Question::ALL[q].answer_space();
            let a = parse(&raw.to_uppercase(), space);
            let b = parse(&raw.to_lowercase(), space);
            prop_assert_eq!((a.label, a.stage), (b.label, b.stage));
        }

        #[test]
        fn never_invents_labels(raw in "\\PC{0,60}", q in 0usize..Question::COUNT) {
            let space = Question::ALL[q].answer_space();
            let r = parse(&raw, space);
            match &r.label {
                Some(l) => prop_assert!(space.contains(&l.as_str()) && r.stage != ParseStage::None),
                None => prop_assert_eq!(r.stage, ParseStage::None),
            }
            prop_assert_eq!(parse(&raw, space), r);
        }
    }
}
