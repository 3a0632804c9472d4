//! Correctness metrics, Kendall's τ and the threshold-perturbation sweep.
//!
//! Unparsed predictions are wrong for every truth class. Classes with no
//! ground truth are left out of balanced accuracy; classes with neither truth
//! nor predictions are left out of macro-F1.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::consistency::{pcov, wpcr, RuleTable};
use crate::oracle::{ConfigError, ThresholdConfig};
use crate::question::{AnswerSet, Question};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("no ground truth to score against")]
    NoGroundTruth,
    #[error("rankings cover different model sets")]
    MismatchedModelSets,
    #[error("sweep alphas must include 1.0")]
    MissingNominalAlpha,
    #[error("invalid threshold config: {0}")]
    Config(#[from] ConfigError),
}

/// Rows are truth classes; columns are predicted classes plus a final
/// `unparsed` column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionTable {
    pub question: Question,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionTable {
    pub fn new(question: Question) -> Self {
        let k = question.class_count();
        Self {
            question,
            counts: vec![vec![0; k + 1]; k],
        }
    }

    pub fn classes(&self) -> usize {
        self.counts.len()
    }

    /// `predicted == None` records an unparsed answer.
    pub fn add(&mut self, truth: usize, predicted: Option<usize>) {
        let col = predicted.unwrap_or(self.classes());
        self.counts[truth][col] += 1;
    }

    pub fn merge(&mut self, other: &ConfusionTable) {
        assert_eq!(self.question, other.question, "merging tables of different questions");
        for (row, other_row) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// N_c, the number of clips whose truth is `c`.
    pub fn truth_count(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }

    pub fn predicted_count(&self, c: usize) -> u64 {
        self.counts.iter().map(|row| row[c]).sum()
    }

    pub fn correct(&self, c: usize) -> u64 {
        self.counts[c][c]
    }

    pub fn unparsed(&self) -> u64 {
        let k = self.classes();
        self.counts.iter().map(|row| row[k]).sum()
    }

    fn trace(&self) -> u64 {
        (0..self.classes()).map(|c| self.correct(c)).sum()
    }

    /// Per-class F1, `None` for a class with no truth and no predictions.
    fn class_f1(&self, c: usize) -> Option<f64> {
        let truth = self.truth_count(c);
        let predicted = self.predicted_count(c);
        if truth == 0 && predicted == 0 {
            return None;
        }
        let tp = self.correct(c) as f64;
        if tp == 0.0 {
            return Some(0.0);
        }
        let precision = tp / predicted as f64;
        let recall = tp / truth as f64;
        Some(2.0 * precision * recall / (precision + recall))
    }
}

pub fn accuracy(ct: &ConfusionTable) -> Result<f64, MetricsError> {
    pooled_accuracy(&[ct])
}

/// Mean of the class-wise recalls over classes present in the truth.
pub fn balanced_accuracy(ct: &ConfusionTable) -> Result<f64, MetricsError> {
    let recalls: Vec<f64> = (0..ct.classes())
        .filter(|&c| ct.truth_count(c) > 0)
        .map(|c| ct.correct(c) as f64 / ct.truth_count(c) as f64)
        .collect();
    if recalls.is_empty() {
        return Err(MetricsError::NoGroundTruth);
    }
    Ok(recalls.iter().sum::<f64>() / recalls.len() as f64)
}

pub fn macro_f1(ct: &ConfusionTable) -> Result<f64, MetricsError> {
    pooled_macro_f1(&[ct])
}

/// Plain accuracy over several tables taken together.
pub fn pooled_accuracy(tables: &[&ConfusionTable]) -> Result<f64, MetricsError> {
    let total: u64 = tables.iter().map(|t| t.total()).sum();
    if total == 0 {
        return Err(MetricsError::NoGroundTruth);
    }
    let correct: u64 = tables.iter().map(|t| t.trace()).sum();
    Ok(correct as f64 / total as f64)
}

/// Macro-F1 over the union of (question, class) pairs of several tables.
pub fn pooled_macro_f1(tables: &[&ConfusionTable]) -> Result<f64, MetricsError> {
    if tables.iter().all(|t| t.total() == 0) {
        return Err(MetricsError::NoGroundTruth);
    }
    let f1s: Vec<f64> = tables
        .iter()
        .flat_map(|t| (0..t.classes()).filter_map(|c| t.class_f1(c)))
        .collect();
    Ok(f1s.iter().sum::<f64>() / f1s.len() as f64)
}

/// One confusion table per question, built from truth and predicted answer
/// sets keyed by clip. Truth questions left unanswered are skipped; a clip
/// without predictions counts as unparsed throughout.
pub fn confusion_tables(
    truth: &BTreeMap<String, AnswerSet>,
    predictions: &BTreeMap<String, AnswerSet>,
) -> BTreeMap<Question, ConfusionTable> {
    let mut tables: BTreeMap<Question, ConfusionTable> =
        Question::ALL.iter().map(|&q| (q, ConfusionTable::new(q))).collect();
    let empty = AnswerSet::new();
    for (clip, gt) in truth {
        let pred = predictions.get(clip).unwrap_or(&empty);
        for q in Question::ALL {
            if let Some(t) = gt.class(q) {
                tables.get_mut(&q).expect("all questions present").add(t, pred.class(q));
            }
        }
    }
    tables
}

/// Accuracy and macro-F1 restricted to the temporal questions.
pub fn temporal_scores(tables: &BTreeMap<Question, ConfusionTable>) -> Result<(f64, f64), MetricsError> {
    let temporal: Vec<&ConfusionTable> = Question::TEMPORAL.iter().filter_map(|q| tables.get(q)).collect();
    Ok((pooled_accuracy(&temporal)?, pooled_macro_f1(&temporal)?))
}

pub fn temporal_accuracy(tables: &BTreeMap<Question, ConfusionTable>) -> Result<f64, MetricsError> {
    temporal_scores(tables).map(|(acc, _)| acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionScores {
    pub acc: f64,
    pub bacc: f64,
    pub f1: f64,
    pub confusion: ConfusionTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateScores {
    pub acc: f64,
    pub bacc: f64,
    pub f1: f64,
    pub temporal_acc: Option<f64>,
    pub temporal_f1: Option<f64>,
    pub wpcr: f64,
    pub pcov: f64,
    pub parsable_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelScores {
    pub per_question: BTreeMap<Question, QuestionScores>,
    pub aggregate: AggregateScores,
}

/// Scores one model's predictions against the truth.
///
/// Aggregates are unweighted means over the questions that have ground
/// truth. WPCR and PCov are computed on the predicted answer sets of the
/// clips in `truth`.
pub fn score_model(
    truth: &BTreeMap<String, AnswerSet>,
    predictions: &BTreeMap<String, AnswerSet>,
    rules: &RuleTable,
) -> Result<ModelScores, MetricsError> {
    let tables = confusion_tables(truth, predictions);
    let mut per_question = BTreeMap::new();
    for (q, ct) in &tables {
        if ct.total() == 0 {
            continue;
        }
        per_question.insert(
            *q,
            QuestionScores {
                acc: accuracy(ct)?,
                bacc: balanced_accuracy(ct)?,
                f1: macro_f1(ct)?,
                confusion: ct.clone(),
            },
        );
    }
    if per_question.is_empty() {
        return Err(MetricsError::NoGroundTruth);
    }
    let avg = |f: fn(&QuestionScores) -> f64| per_question.values().map(f).sum::<f64>() / per_question.len() as f64;
    let (temporal_acc, temporal_f1) = match temporal_scores(&tables) {
        Ok((a, f)) => (Some(a), Some(f)),
        Err(_) => (None, None),
    };

    let empty = AnswerSet::new();
    let clips: Vec<_> = truth
        .keys()
        .map(|clip| rules.clip(clip, predictions.get(clip).unwrap_or(&empty)))
        .collect();
    let answered: u64 = tables.values().map(|t| t.total() - t.unparsed()).sum();
    let asked: u64 = tables.values().map(|t| t.total()).sum();

    Ok(ModelScores {
        aggregate: AggregateScores {
            acc: avg(|s| s.acc),
            bacc: avg(|s| s.bacc),
            f1: avg(|s| s.f1),
            temporal_acc,
            temporal_f1,
            wpcr: wpcr(&clips).map_err(|_| MetricsError::NoGroundTruth)?,
            pcov: pcov(&clips).map_err(|_| MetricsError::NoGroundTruth)?,
            parsable_rate: answered as f64 / asked as f64,
        },
        per_question,
    })
}

/// Kendall's τ between two orderings of the same models (best first).
pub fn kendall_tau<S: AsRef<str>>(ranking_a: &[S], ranking_b: &[S]) -> Result<f64, MetricsError> {
    let position = |ranking: &[S], name: &str| ranking.iter().position(|m| m.as_ref() == name);
    let mut a = Vec::with_capacity(ranking_a.len());
    let mut b = Vec::with_capacity(ranking_a.len());
    for (i, m) in ranking_a.iter().enumerate() {
        let pos = position(ranking_b, m.as_ref()).ok_or(MetricsError::MismatchedModelSets)?;
        if position(&ranking_a[i + 1..], m.as_ref()).is_some() {
            return Err(MetricsError::MismatchedModelSets);
        }
        a.push(i as f64);
        b.push(pos as f64);
    }
    if ranking_a.len() != ranking_b.len() {
        return Err(MetricsError::MismatchedModelSets);
    }
    Ok(kendall_tau_b(&a, &b))
}

/// τ-b on paired scores.
///
/// When one side has no untied pairs the coefficient is undefined; this
/// returns 1.0 if both sides are fully tied and 0.0 otherwise.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "kendall_tau_b needs paired samples");
    let (mut concordant, mut discordant, mut tied_x, mut tied_y) = (0i64, 0i64, 0i64, 0i64);
    let n = x.len();
    for i in 0..n {
        for k in i + 1..n {
            let dx = x[i] - x[k];
            let dy = y[i] - y[k];
            match (dx == 0.0, dy == 0.0) {
                (true, true) => {}
                (true, false) => tied_x += 1,
                (false, true) => tied_y += 1,
                (false, false) if (dx > 0.0) == (dy > 0.0) => concordant += 1,
                (false, false) => discordant += 1,
            }
        }
    }
    let n_x = (concordant + discordant + tied_y) as f64;
    let n_y = (concordant + discordant + tied_x) as f64;
    if n_x == 0.0 || n_y == 0.0 {
        return if n_x == n_y { 1.0 } else { 0.0 };
    }
    (concordant - discordant) as f64 / crate::math::sqrt(n_x * n_y)
}

/// Metric used to rank models in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankKey {
    #[default]
    BalancedAccuracy,
    Accuracy,
    MacroF1,
}

impl RankKey {
    fn pick(self, agg: &AggregateScores) -> f64 {
        match self {
            RankKey::BalancedAccuracy => agg.bacc,
            RankKey::Accuracy => agg.acc,
            RankKey::MacroF1 => agg.f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepModelMetrics {
    pub acc: f64,
    pub bacc: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub alpha: f64,
    pub per_model: BTreeMap<String, SweepModelMetrics>,
    /// Best first; equal scores keep name order.
    pub ranking: Vec<String>,
    pub kendall_tau_vs_nominal: f64,
}

/// Rescoring sweep over `alphas`, with truth regenerated by `labels_at` for
/// each scaled threshold set. `predictions` maps model name to per-clip
/// predicted answers.
pub fn sensitivity_sweep_with<F>(
    mut labels_at: F,
    predictions: &BTreeMap<String, BTreeMap<String, AnswerSet>>,
    cfg: &ThresholdConfig,
    alphas: &[f64],
    key: RankKey,
) -> Result<Vec<SweepResult>, MetricsError>
where
    F: FnMut(&ThresholdConfig) -> BTreeMap<String, AnswerSet>,
{
    if !alphas.contains(&1.0) {
        return Err(MetricsError::MissingNominalAlpha);
    }
    let rules = RuleTable::standard();
    let mut points = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let scaled = cfg.with_alpha(alpha);
        scaled.validate()?;
        let truth = labels_at(&scaled);
        let mut per_model = BTreeMap::new();
        let mut scores = Vec::with_capacity(predictions.len());
        for (model, preds) in predictions {
            let agg = score_model(&truth, preds, &rules)?.aggregate;
            scores.push(key.pick(&agg));
            per_model.insert(
                model.clone(),
                SweepModelMetrics {
                    acc: agg.acc,
                    bacc: agg.bacc,
                    f1: agg.f1,
                },
            );
        }
        let mut ranking: Vec<(&String, f64)> = predictions.keys().zip(scores.iter().copied()).collect();
        ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        points.push((
            scores,
            SweepResult {
                alpha,
                per_model,
                ranking: ranking.into_iter().map(|(m, _)| m.clone()).collect(),
                kendall_tau_vs_nominal: 0.0,
            },
        ));
    }
    let nominal = points
        .iter()
        .find(|(_, p)| p.alpha == 1.0)
        .map(|(s, _)| s.clone())
        .expect("checked above");
    Ok(points
        .into_iter()
        .map(|(scores, mut p)| {
            p.kendall_tau_vs_nominal = kendall_tau_b(&scores, &nominal);
            p
        })
        .collect())
}

/// [`sensitivity_sweep_with`] relabeling `clips` with the oracle.
pub fn sensitivity_sweep(
    clips: &[(String, crate::kinematics::StateSequence)],
    predictions: &BTreeMap<String, BTreeMap<String, AnswerSet>>,
    cfg: &ThresholdConfig,
    alphas: &[f64],
    key: RankKey,
) -> Result<Vec<SweepResult>, MetricsError> {
    let summaries: Vec<_> = clips.iter().map(|(_, s)| crate::kinematics::summarize(s)).collect();
    sensitivity_sweep_with(
        |scaled| {
            clips
                .iter()
                .zip(&summaries)
                .map(|((id, seq), summary)| (id.clone(), crate::oracle::answer_set(seq, summary, scaled)))
                .collect()
        },
        predictions,
        cfg,
        alphas,
        key,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table(q: Question, pairs: &[(usize, Option<usize>)]) -> ConfusionTable {
        let mut ct = ConfusionTable::new(q);
        for &(t, p) in pairs {
            ct.add(t, p);
        }
        ct
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn perfect_predictor() {
        let ct = table(Question::TurnDirection, &[(0, Some(0)), (1, Some(1)), (2, Some(2))]);
        assert_eq!(balanced_accuracy(&ct), Ok(1.0));
        assert_eq!(macro_f1(&ct), Ok(1.0));
        assert_eq!(accuracy(&ct), Ok(1.0));
    }

    #[test]
    fn constant_predictor_on_balanced_classes() {
        let pairs: Vec<_> = (0..3).flat_map(|c| [(c, Some(0)); 5]).collect();
        let ct = table(Question::TurnDirection, &pairs);
        assert!(close(balanced_accuracy(&ct).unwrap(), 1.0 / 3.0));
        // class 0: p = 1/3, r = 1 -> f1 = 0.5
        assert!(close(macro_f1(&ct).unwrap(), 1.0 / 6.0));
    }

    #[test]
    fn absent_classes_are_excluded() {
        // braking: only emergency and none occur in truth
        let ct = table(Question::BrakingIntensity, &[(0, Some(0)), (3, Some(0)), (3, Some(3))]);
        assert!(close(balanced_accuracy(&ct).unwrap(), (1.0 + 0.5) / 2.0));
        // f1: class 0 p=1/2 r=1 -> 2/3; class 3 p=1 r=1/2 -> 2/3
        assert!(close(macro_f1(&ct).unwrap(), 2.0 / 3.0));
    }

    #[test]
    fn unparsed_is_wrong() {
        let ct = table(Question::MeanSpeed, &[(0, None), (1, None)]);
        assert_eq!(balanced_accuracy(&ct), Ok(0.0));
        assert_eq!(macro_f1(&ct), Ok(0.0));
        assert_eq!(accuracy(&ct), Ok(0.0));
        assert_eq!(ct.unparsed(), 2);
        let ct = table(Question::MeanSpeed, &[(0, Some(0)), (1, Some(0))]);
        assert_eq!(accuracy(&ct), Ok(0.5));
    }

    #[test]
    fn empty_table() {
        let ct = ConfusionTable::new(Question::MeanSpeed);
        assert_eq!(accuracy(&ct), Err(MetricsError::NoGroundTruth));
        assert_eq!(balanced_accuracy(&ct), Err(MetricsError::NoGroundTruth));
        assert_eq!(macro_f1(&ct), Err(MetricsError::NoGroundTruth));
    }

    fn set_with(pairs: &[(Question, &str)]) -> AnswerSet {
        let mut s = AnswerSet::new();
        for (q, l) in pairs {
            s.set(*q, l);
        }
        s
    }

    #[test]
    fn temporal_accuracy_cases() {
        let truth: BTreeMap<String, AnswerSet> = (0..4)
            .map(|i| {
                (
                    i.to_string(),
                    set_with(&[
                        (Question::SpeedPeakHalf, "first_half"),
                        (Question::ContrastiveSeq, "similar"),
                    ]),
                )
            })
            .collect();
        let all_right = truth.clone();
        let tables = confusion_tables(&truth, &all_right);
        assert_eq!(temporal_accuracy(&tables), Ok(1.0));

        let half: BTreeMap<String, AnswerSet> = truth
            .keys()
            .map(|k| {
                (
                    k.clone(),
                    set_with(&[
                        (Question::SpeedPeakHalf, "first_half"),
                        (Question::ContrastiveSeq, "second_half"),
                    ]),
                )
            })
            .collect();
        let tables = confusion_tables(&truth, &half);
        assert_eq!(temporal_accuracy(&tables), Ok(0.5));

        let other: BTreeMap<String, AnswerSet> =
            [("x".to_string(), set_with(&[(Question::TurnDirection, "left")]))].into();
        let tables = confusion_tables(&other, &other);
        assert_eq!(temporal_accuracy(&tables), Err(MetricsError::NoGroundTruth));
    }

    #[test]
    fn kendall_examples() {
        let a = ["a", "b", "c", "d", "e"];
        let mut rev = a;
        rev.reverse();
        assert_eq!(kendall_tau(&a, &a), Ok(1.0));
        assert_eq!(kendall_tau(&a, &rev), Ok(-1.0));
        let swapped = ["a", "c", "b", "d"];
        assert!(close(kendall_tau(&a[..4], &swapped).unwrap(), 4.0 / 6.0));
        assert_eq!(
            kendall_tau(&a[..3], &["a", "b", "x"]),
            Err(MetricsError::MismatchedModelSets)
        );
        assert_eq!(kendall_tau(&a[..3], &a[..2]), Err(MetricsError::MismatchedModelSets));
    }

    #[test]
    fn tau_b_with_ties() {
        // scipy.stats.kendalltau([1,2,2,3],[1,2,3,4]) = 0.9128709291752769
        let t = kendall_tau_b(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]);
        assert!((t - 0.912_870_929_175_276_9).abs() < 1e-12);
        assert_eq!(kendall_tau_b(&[1.0, 1.0], &[2.0, 2.0]), 1.0);
        assert_eq!(kendall_tau_b(&[1.0, 1.0], &[1.0, 2.0]), 0.0);
    }

    #[test]
    fn random_predictor_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (q, k) in [
            (Question::MeanSpeed, 2),
            (Question::TurnDirection, 3),
            (Question::SpeedRegime, 4),
        ] {
            let mut ct = ConfusionTable::new(q);
            for _ in 0..10_000 {
                ct.add(rng.random_range(0..k), Some(rng.random_range(0..k)));
            }
            let bacc = balanced_accuracy(&ct).unwrap();
            assert!((bacc - 1.0 / k as f64).abs() < 0.03, "k={k} bacc={bacc}");
        }
    }

    #[test]
    fn score_model_on_echo() {
        let truth: BTreeMap<String, AnswerSet> = [(
            "c".to_string(),
            AnswerSet::from_labels([
                "straight", "none", "urban", "smooth", "steady", "no", "no", "no", "none", "no", "no", "no", "no_peak",
                "similar",
            ])
            .unwrap(),
        )]
        .into();
        let s = score_model(&truth, &truth, &RuleTable::standard()).unwrap();
        assert_eq!(s.aggregate.bacc, 1.0);
        assert_eq!(s.aggregate.parsable_rate, 1.0);
        assert!(close(s.aggregate.wpcr, 0.2));
        let s = score_model(&truth, &BTreeMap::new(), &RuleTable::standard()).unwrap();
        assert_eq!(s.aggregate.acc, 0.0);
        assert_eq!(s.aggregate.parsable_rate, 0.0);
        assert_eq!(s.aggregate.wpcr, 0.0);
    }

    #[test]
    fn sweep_needs_nominal_alpha() {
        let r = sensitivity_sweep(
            &[],
            &BTreeMap::new(),
            &ThresholdConfig::default(),
            &[0.5, 1.5],
            RankKey::default(),
        );
        assert_eq!(r, Err(MetricsError::MissingNominalAlpha));
    }

    fn any_pairs(k: usize) -> impl Strategy<Value = Vec<(usize, Option<usize>)>> {
        proptest::collection::vec((0..k, proptest::option::of(0..k)), 1..60)
    }

    proptest! {
        #[test]
        fn order_does_not_matter(pairs in any_pairs(3), seed in any::<u64>()) {
            let mut shuffled = pairs.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rng.random_range(0..=i));
            }
            let a = table(Question::TurnDirection, &pairs);
            let b = table(Question::TurnDirection, &shuffled);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(balanced_accuracy(&a), balanced_accuracy(&b));
        }

        #[test]
        fn f1_is_one_only_on_clean_diagonal(pairs in any_pairs(3)) {
            let ct = table(Question::TurnDirection, &pairs);
            let f1 = macro_f1(&ct).unwrap();
            prop_assert!(f1 <= 1.0 + 1e-12);
            let diagonal = pairs.iter().all(|(t, p)| Some(*t) == *p);
            prop_assert_eq!(close(f1, 1.0), diagonal);
        }

        #[test]
        fn merge_equals_joint(a in any_pairs(4), b in any_pairs(4)) {
            let mut merged = table(Question::SpeedRegime, &a);
            merged.merge(&table(Question::SpeedRegime, &b));
            let joint: Vec<_> = a.iter().chain(&b).copied().collect();
            prop_assert_eq!(merged, table(Question::SpeedRegime, &joint));
        }

        #[test]
        fn tau_self_and_reverse(n in 2usize..12) {
            let names: Vec<String> = (0..n).map(|i| alloc::format!("m{i}")).collect();
            let mut rev = names.clone();
            rev.reverse();
            prop_assert_eq!(kendall_tau(&names, &names).unwrap(), 1.0);
            prop_assert!(close(kendall_tau(&names, &rev).unwrap(), -1.0));
        }
    }
}
