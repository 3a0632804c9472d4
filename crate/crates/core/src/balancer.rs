//! Greedy multi-question class balancing under per-source caps.
//!
//! Each step finds the (question, class) pair furthest below its target
//! frequency, restricts the candidates to unselected clips answering that
//! class, and takes the candidate that also fills the most deficit on the
//! other questions. Frequencies are kept as integer counts.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math;
use crate::question::{AnswerSet, Question};

const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Real,
    Sim,
}

impl Source {
    fn index(self) -> usize {
        self as usize
    }
}

/// A candidate clip: one class index per question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolClip {
    pub clip_id: String,
    pub source: Source,
    pub answers: Vec<usize>,
}

impl PoolClip {
    /// Builds a clip over the fourteen questions; `None` if any is unanswered.
    pub fn from_answer_set(clip_id: &str, source: Source, answers: &AnswerSet) -> Option<Self> {
        let answers = Question::ALL
            .iter()
            .map(|&q| answers.class(q))
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            clip_id: clip_id.into(),
            source,
            answers,
        })
    }
}

/// Maximum selected clips per source; `None` is unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SourceCaps {
    pub real: Option<usize>,
    pub sim: Option<usize>,
}

impl SourceCaps {
    fn cap(&self, source: Source) -> Option<usize> {
        match source {
            Source::Real => self.real,
            Source::Sim => self.sim,
        }
    }
}

/// Target frequency f*[q][c]; rows should each sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Targets(pub Vec<Vec<f64>>);

impl Targets {
    /// 1/|C_q| for every class.
    pub fn uniform(class_counts: &[usize]) -> Self {
        Self(class_counts.iter().map(|&k| vec![1.0 / k as f64; k]).collect())
    }

    /// Uniform targets over the fourteen questions.
    pub fn uniform_questions() -> Self {
        let counts: Vec<usize> = Question::ALL.iter().map(|q| q.class_count()).collect();
        Self::uniform(&counts)
    }

    pub fn questions(&self) -> usize {
        self.0.len()
    }

    fn class_counts(&self) -> Vec<usize> {
        self.0.iter().map(Vec::len).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BalanceError {
    #[error("caps allow at most {cap_total} clips, {n} requested")]
    InfeasibleCaps { cap_total: usize, n: usize },
    #[error("pool exhausted after {selected} of {n} clips")]
    PoolExhausted { selected: usize, n: usize },
    #[error("clip `{0}` does not match the target question/class layout")]
    InvalidClip(String),
}

/// Selection so far, with per-(question, class) and per-source counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceState {
    /// Pool indices in selection order.
    pub selected: Vec<usize>,
    pub counts: Vec<Vec<u64>>,
    pub source_counts: [usize; 2],
}

impl BalanceState {
    pub fn new(class_counts: &[usize]) -> Self {
        Self {
            selected: Vec::new(),
            counts: class_counts.iter().map(|&k| vec![0; k]).collect(),
            source_counts: [0; 2],
        }
    }

    /// Rebuilds the state from scratch for the given selection.
    pub fn from_selection(pool: &[PoolClip], selected: &[usize], class_counts: &[usize]) -> Self {
        let mut state = Self::new(class_counts);
        for &i in selected {
            state.push(i, &pool[i]);
        }
        state
    }

    fn push(&mut self, index: usize, clip: &PoolClip) {
        self.selected.push(index);
        for (q, &c) in clip.answers.iter().enumerate() {
            self.counts[q][c] += 1;
        }
        self.source_counts[clip.source.index()] += 1;
    }

    /// f̂[q][c]; zero before anything is selected.
    pub fn freq(&self, q: usize, c: usize) -> f64 {
        if self.selected.is_empty() {
            0.0
        } else {
            self.counts[q][c] as f64 / self.selected.len() as f64
        }
    }

    fn deficit(&self, targets: &Targets, q: usize, c: usize) -> f64 {
        targets.0[q][c] - self.freq(q, c)
    }
}

/// The (question, class) pair with the largest target-minus-empirical gap,
/// ties going to the lexicographically first pair.
pub fn worst_imbalance(state: &BalanceState, targets: &Targets) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_gap = f64::NEG_INFINITY;
    for (q, row) in targets.0.iter().enumerate() {
        for c in 0..row.len() {
            let gap = state.deficit(targets, q, c);
            if gap > best_gap + TIE_EPS {
                best = (q, c);
                best_gap = gap;
            }
        }
    }
    best
}

/// Σ over q ≠ q_worst of the positive deficit at the clip's answer to q.
pub fn helpfulness(clip: &PoolClip, state: &BalanceState, targets: &Targets, q_worst: usize) -> f64 {
    clip.answers
        .iter()
        .enumerate()
        .filter(|(q, _)| *q != q_worst)
        .map(|(q, &c)| math::max(0.0, state.deficit(targets, q, c)))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceOutcome {
    pub selected: Vec<String>,
    pub state: BalanceState,
}

fn validate(pool: &[PoolClip], targets: &Targets) -> Result<(), BalanceError> {
    let layout = targets.class_counts();
    for clip in pool {
        let ok = clip.answers.len() == layout.len() && clip.answers.iter().zip(&layout).all(|(c, k)| c < k);
        if !ok {
            return Err(BalanceError::InvalidClip(clip.clip_id.clone()));
        }
    }
    Ok(())
}

/// Selects `n` clips from `pool`.
///
/// Selecting the whole pool returns it in pool order.
pub fn balance(
    pool: &[PoolClip],
    n: usize,
    caps: SourceCaps,
    targets: &Targets,
) -> Result<BalanceOutcome, BalanceError> {
    validate(pool, targets)?;
    if let (Some(real), Some(sim)) = (caps.real, caps.sim) {
        if real + sim < n {
            return Err(BalanceError::InfeasibleCaps {
                cap_total: real + sim,
                n,
            });
        }
    }
    let layout = targets.class_counts();
    let mut state = BalanceState::new(&layout);
    let mut taken = vec![false; pool.len()];
    let allowed = |state: &BalanceState, clip: &PoolClip| {
        caps.cap(clip.source)
            .is_none_or(|cap| state.source_counts[clip.source.index()] < cap)
    };

    if n == pool.len() {
        for (i, clip) in pool.iter().enumerate() {
            if !allowed(&state, clip) {
                return Err(BalanceError::PoolExhausted { selected: i, n });
            }
            state.push(i, clip);
        }
    }

    while state.selected.len() < n {
        let (q_worst, c_worst) = worst_imbalance(&state, targets);
        let open: Vec<usize> = (0..pool.len())
            .filter(|&i| !taken[i] && allowed(&state, &pool[i]))
            .collect();
        let matching: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&i| pool[i].answers[q_worst] == c_worst)
            .collect();
        let candidates = if matching.is_empty() { &open } else { &matching };
        let mut pick: Option<(usize, f64)> = None;
        for &i in candidates {
            let h = helpfulness(&pool[i], &state, targets, q_worst);
            if pick.is_none_or(|(_, best)| h > best + TIE_EPS) {
                pick = Some((i, h));
            }
        }
        let Some((i, _)) = pick else {
            return Err(BalanceError::PoolExhausted {
                selected: state.selected.len(),
                n,
            });
        };
        taken[i] = true;
        state.push(i, &pool[i]);
    }

    Ok(BalanceOutcome {
        selected: state.selected.iter().map(|&i| pool[i].clip_id.clone()).collect(),
        state,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionImbalance {
    pub freq: Vec<f64>,
    pub target: Vec<f64>,
    pub max_abs_deviation: f64,
}

/// Per-question frequencies and max |f̂ − f*|.
pub fn imbalance_report(state: &BalanceState, targets: &Targets) -> Vec<QuestionImbalance> {
    targets
        .0
        .iter()
        .enumerate()
        .map(|(q, target)| {
            let freq: Vec<f64> = (0..target.len()).map(|c| state.freq(q, c)).collect();
            let max_abs_deviation = freq
                .iter()
                .zip(target)
                .map(|(f, t)| math::abs(f - t))
                .fold(0.0, math::max);
            QuestionImbalance {
                freq,
                target: target.clone(),
                max_abs_deviation,
            }
        })
        .collect()
}

/// Largest |f̂ − f*| over all pairs.
pub fn max_deviation(state: &BalanceState, targets: &Targets) -> f64 {
    imbalance_report(state, targets)
        .iter()
        .map(|r| r.max_abs_deviation)
        .fold(0.0, math::max)
}
