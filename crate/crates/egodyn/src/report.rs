//! Report documents assembled from core metrics.

use std::collections::BTreeMap;

use egodyn_core::consistency::ClipConsistency;
use egodyn_core::metrics::{AggregateScores, ModelScores, RankKey, SweepResult};
use egodyn_core::parser::{ParseResult, ParseStage};
use egodyn_core::Question;
use serde::{Deserialize, Serialize};

use crate::encoding::fixed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionReport {
    pub acc: f64,
    pub bacc: f64,
    pub f1: f64,
    /// Row and column labels of `confusion`; columns add `unparsed`.
    pub labels: Vec<String>,
    /// `confusion[truth][predicted]`.
    pub confusion: Vec<Vec<u64>>,
    /// Classes with no ground truth, left out of `bacc`.
    pub classes_without_truth: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub model: String,
    pub clips: usize,
    pub per_question: BTreeMap<Question, QuestionReport>,
    pub aggregate: AggregateScores,
    pub consistency: Vec<ClipConsistency>,
    pub notes: BTreeMap<String, String>,
}

impl EvaluationReport {
    pub fn new(model: &str, clips: usize, scores: ModelScores, consistency: Vec<ClipConsistency>) -> Self {
        let per_question = scores
            .per_question
            .into_iter()
            .map(|(q, s)| {
                let labels: Vec<String> = q.answer_space().iter().map(|l| l.to_string()).collect();
                let classes_without_truth = labels
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| s.confusion.truth_count(*c) == 0)
                    .map(|(_, l)| l.clone())
                    .collect();
                let report = QuestionReport {
                    acc: s.acc,
                    bacc: s.bacc,
                    f1: s.f1,
                    labels,
                    confusion: s.confusion.counts,
                    classes_without_truth,
                };
                (q, report)
            })
            .collect();
        let notes = [
            ("unparsed", "counted as incorrect for every metric"),
            ("bacc", "mean recall over classes with ground truth"),
            ("f1", "macro over classes with ground truth or predictions"),
            (
                "temporal",
                "pooled confusion of speed_peak_half and contrastive_seq; f1 is macro over the pooled classes",
            ),
            ("aggregate", "unweighted mean over questions with ground truth"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        Self {
            model: model.to_string(),
            clips,
            per_question,
            aggregate: scores.aggregate,
            consistency,
            notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rank_key: RankKey,
    pub alphas: Vec<f64>,
    pub models: Vec<String>,
    pub points: Vec<SweepResult>,
}

impl SweepReport {
    /// Long-format rows: alpha, model, acc, bacc, f1, rank, kendall_tau.
    pub fn csv(&self) -> String {
        let mut out = String::from("alpha,model,acc,bacc,f1,rank,kendall_tau\n");
        for p in &self.points {
            for (model, m) in &p.per_model {
                let rank = p.ranking.iter().position(|r| r == model).map_or(0, |i| i + 1);
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    p.alpha, model, m.acc, m.bacc, m.f1, rank, p.kendall_tau_vs_nominal
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseRate {
    pub total: usize,
    pub parsed: usize,
    pub parsable_rate: f64,
    /// Percentage rounded to one decimal, as text.
    pub parsable_percent: String,
    pub stages: BTreeMap<String, usize>,
}

impl ParseRate {
    pub fn from_results<'a>(results: impl IntoIterator<Item = &'a ParseResult>) -> Self {
        let mut stages: BTreeMap<String, usize> = [
            ParseStage::Exact,
            ParseStage::Underscore,
            ParseStage::LastLine,
            ParseStage::Substring,
            ParseStage::None,
        ]
        .iter()
        .map(|s| (s.as_str().to_string(), 0))
        .collect();
        let (mut total, mut parsed) = (0, 0);
        for r in results {
            total += 1;
            parsed += r.is_parsed() as usize;
            *stages.get_mut(r.stage.as_str()).expect("all stages listed") += 1;
        }
        let rate = if total == 0 { 0.0 } else { parsed as f64 / total as f64 };
        Self {
            total,
            parsed,
            parsable_rate: rate,
            parsable_percent: fixed(rate * 100.0, 1),
            stages,
        }
    }
}
