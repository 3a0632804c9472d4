//! Command dispatch. Each command reads its inputs, writes its outputs into
//! the output directory and finishes with the manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use egodyn_core::balancer::{self, PoolClip, Source, Targets};
use egodyn_core::baselines::{
    flow_answers, synth_proxies, to_answer_set, vo_answers, FlowThresholds, ProxyGains, VoThresholds, SUBSET,
};
use egodyn_core::consistency::RuleTable;
use egodyn_core::kinematics::{summarize, StateSequence};
use egodyn_core::metrics::{score_model, sensitivity_sweep};
use egodyn_core::oracle::{answer_set, calibrate_thresholds, label_all, stratification_tags, ThresholdConfig};
use egodyn_core::parser::{parse, parse_class};
use egodyn_core::synth::{coverage, generate, suite_clip_id, suite_spec, ManeuverSpec};
use egodyn_core::{AnswerSet, Question};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{BaselineKind, Command, LoadedConfig, DEFAULT_ALPHAS};
use crate::encoding::encode_trajectory;
use crate::formats::{
    read_json, read_jsonl, read_predictions, read_proxies, read_sources, read_trajectories, write_json, write_jsonl,
    write_proxies, write_states, Ingest, LabelRecord, ParsedPrediction, PredictionRecord, ProxySeries,
};
use crate::manifest::{sha256_file, sha256_hex, Manifest, MANIFEST_FILE};
use crate::report::{EvaluationReport, ParseRate, SweepReport};
use crate::Invalid;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "EGODYN_THREADS";

/// What a finished run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
    /// Short human-readable lines for the terminal.
    pub summary: Vec<String>,
}

struct Ctx<'a> {
    cfg: &'a LoadedConfig,
    command: Command,
    out: PathBuf,
    inputs: BTreeMap<String, String>,
    outputs: Vec<String>,
    summary: Vec<String>,
}

impl Ctx<'_> {
    /// Resolves a configured input path and records its hash.
    fn input(&mut self, configured: &Path) -> Result<PathBuf> {
        let path = self.cfg.resolve(configured);
        let hash = sha256_file(&path)?;
        self.inputs.insert(configured.display().to_string(), hash);
        Ok(path)
    }

    fn required(&mut self, p: &Option<PathBuf>, field: &str) -> Result<PathBuf> {
        self.cfg.require(p, field, self.command)?;
        self.input(p.as_ref().expect("checked"))
    }

    fn output(&mut self, name: &str) -> Result<PathBuf> {
        let path = self.out.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        self.outputs.push(name.to_string());
        Ok(path)
    }

    fn say(&mut self, line: String) {
        self.summary.push(line);
    }

    fn thresholds(&mut self) -> Result<ThresholdConfig> {
        let cfg = match self.cfg.config.thresholds.clone() {
            Some(p) => {
                let path = self.input(&p)?;
                read_json::<ThresholdConfig>(&path).map_err(|e| Invalid(format!("{e:#}")))?
            }
            None => ThresholdConfig::default(),
        };
        cfg.validate().map_err(|e| Invalid(format!("thresholds: {e}")))?;
        Ok(cfg)
    }

    /// Thresholds at the single configured alpha, if any.
    fn thresholds_at_alpha(&mut self) -> Result<ThresholdConfig> {
        let base = self.thresholds()?;
        let cfg = match self.cfg.config.alphas.as_deref() {
            None => base,
            Some([alpha]) => base.with_alpha(*alpha),
            Some(_) => bail!(Invalid(format!("`{}` takes a single alpha", self.command.as_str()))),
        };
        cfg.validate().map_err(|e| Invalid(format!("thresholds: {e}")))?;
        Ok(cfg)
    }

    fn rules(&mut self) -> Result<RuleTable> {
        match self.cfg.config.rules.clone() {
            Some(p) => {
                let path = self.input(&p)?;
                read_json::<RuleTable>(&path).map_err(|e| Invalid(format!("{e:#}")).into())
            }
            None => Ok(RuleTable::standard()),
        }
    }

    fn trajectories(&mut self) -> Result<Vec<(String, StateSequence)>> {
        let path = self.required(&self.cfg.config.trajectories.clone(), "trajectories")?;
        let c = &self.cfg.config;
        let clips = read_trajectories(
            &path,
            &Ingest {
                rate_hz: c.rate_hz,
                window_s: c.window_s,
                smoothing: c.smoothing,
            },
        )?;
        if clips.is_empty() {
            bail!(Invalid(format!("{} holds no clips", path.display())));
        }
        Ok(clips)
    }

    /// Ground truth from `labels` when given, otherwise oracle labels of
    /// `trajectories`. Keyed by clip, with the clips' first-seen order.
    fn truth(&mut self, cfg: &ThresholdConfig) -> Result<(Vec<String>, BTreeMap<String, AnswerSet>)> {
        if let Some(p) = self.cfg.config.labels.clone() {
            let path = self.input(&p)?;
            let records: Vec<LabelRecord> = read_jsonl(&path)?;
            return label_sets(&records);
        }
        if self.cfg.config.trajectories.is_none() {
            bail!(Invalid(format!(
                "`{}` needs `labels` or `trajectories` in the config",
                self.command.as_str()
            )));
        }
        let clips = self.trajectories()?;
        let order = clips.iter().map(|(id, _)| id.clone()).collect();
        Ok((order, oracle_sets(&clips, cfg)))
    }

    fn predictions(&mut self) -> Result<BTreeMap<String, Vec<PredictionRecord>>> {
        let paths = self.cfg.config.predictions.clone();
        if paths.is_empty() {
            bail!(Invalid(format!(
                "`{}` needs `predictions` in the config",
                self.command.as_str()
            )));
        }
        let resolved = paths.iter().map(|p| self.input(p)).collect::<Result<Vec<_>>>()?;
        read_predictions(&resolved)
    }
}

fn label_sets(records: &[LabelRecord]) -> Result<(Vec<String>, BTreeMap<String, AnswerSet>)> {
    let mut order = Vec::new();
    let mut sets: BTreeMap<String, AnswerSet> = BTreeMap::new();
    for r in records {
        if !sets.contains_key(&r.clip_id) {
            order.push(r.clip_id.clone());
        }
        let set = sets.entry(r.clip_id.clone()).or_default();
        if set.get(r.question_id).is_some() {
            bail!(Invalid(format!("clip `{}` answers {} twice", r.clip_id, r.question_id)));
        }
        if !set.set(r.question_id, &r.answer) {
            bail!(Invalid(format!(
                "clip `{}`: `{}` is not an answer to {}",
                r.clip_id, r.answer, r.question_id
            )));
        }
    }
    Ok((order, sets))
}

fn oracle_sets(clips: &[(String, StateSequence)], cfg: &ThresholdConfig) -> BTreeMap<String, AnswerSet> {
    clips
        .par_iter()
        .map(|(id, seq)| (id.clone(), answer_set(seq, &summarize(seq), cfg)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Parses every record into per-clip answer sets.
fn parsed_sets(model: &str, records: &[PredictionRecord]) -> Result<BTreeMap<String, AnswerSet>> {
    let mut out: BTreeMap<String, AnswerSet> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for r in records {
        if !seen.insert((r.clip_id.as_str(), r.question_id)) {
            bail!(Invalid(format!(
                "model `{model}` answers {} for clip `{}` twice",
                r.question_id, r.clip_id
            )));
        }
        let (class, _) = parse_class(&r.response, r.question_id);
        out.entry(r.clip_id.clone())
            .or_default()
            .set_class(r.question_id, class);
    }
    Ok(out)
}

fn stable_hash<T: Serialize>(value: &T) -> Result<String> {
    Ok(sha256_hex(&serde_json::to_vec(value)?))
}

/// Runs `command`, honouring [`THREADS_ENV`].
pub fn run(command: Command, cfg: &LoadedConfig) -> Result<RunOutcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Invalid(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    pool.install(|| run_in_pool(command, cfg))
}

fn run_in_pool(command: Command, cfg: &LoadedConfig) -> Result<RunOutcome> {
    let out = cfg.out_dir();
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let mut ctx = Ctx {
        cfg,
        command,
        out: out.clone(),
        inputs: BTreeMap::new(),
        outputs: Vec::new(),
        summary: Vec::new(),
    };
    match command {
        Command::Label => label(&mut ctx)?,
        Command::Balance => balance(&mut ctx)?,
        Command::Evaluate => evaluate(&mut ctx)?,
        Command::Sweep => sweep(&mut ctx)?,
        Command::Parse => parse_cmd(&mut ctx)?,
        Command::Baseline => baseline(&mut ctx)?,
        Command::Synth => synth(&mut ctx)?,
        Command::CalibrateThresholds => calibrate(&mut ctx)?,
    }

    // the output directory is where results go, not what they are
    let mut hashed = cfg.config.clone();
    hashed.out = PathBuf::new();
    let mut outputs = BTreeMap::new();
    for name in &ctx.outputs {
        outputs.insert(name.clone(), sha256_file(&out.join(name))?);
    }
    let manifest = Manifest {
        command: command.as_str().to_string(),
        egodyn_version: env!("CARGO_PKG_VERSION").to_string(),
        egodyn_core_version: egodyn_core::VERSION.to_string(),
        config_sha256: stable_hash(&(command, &hashed))?,
        seed: cfg.config.seed,
        inputs: ctx.inputs,
        outputs,
    };
    write_json(&out.join(MANIFEST_FILE), &manifest)?;
    Ok(RunOutcome {
        out_dir: out,
        manifest,
        summary: ctx.summary,
    })
}

#[derive(Serialize)]
struct TagRecord<'a> {
    clip_id: &'a str,
    has_turn: bool,
    has_braking: bool,
    has_aggressive: bool,
    bin: u8,
}

#[derive(Serialize)]
struct PromptRecord<'a> {
    clip_id: &'a str,
    encoding: &'static str,
    n_steps: usize,
    text: String,
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    clip_id: &'a str,
    #[serde(flatten)]
    summary: &'a egodyn_core::kinematics::KinematicSummary,
}

fn label(ctx: &mut Ctx) -> Result<()> {
    let th = ctx.thresholds_at_alpha()?;
    let clips = ctx.trajectories()?;
    let (encoding, n_steps) = (ctx.cfg.config.encoding, ctx.cfg.config.n_steps);
    let results = clips
        .par_iter()
        .map(|(id, seq)| {
            let summary = summarize(seq);
            let records = label_all(id, seq, &summary, &th);
            let tags = stratification_tags(seq, &summary, &th);
            let text = encode_trajectory(seq, &summary, encoding, n_steps).with_context(|| format!("clip `{id}`"))?;
            Ok((summary, records, tags, text))
        })
        .collect::<Result<Vec<_>>>()?;

    write_jsonl(&ctx.output("qa.jsonl")?, results.iter().flat_map(|r| &r.1))?;
    write_jsonl(
        &ctx.output("tags.jsonl")?,
        clips.iter().zip(&results).map(|((id, _), r)| TagRecord {
            clip_id: id,
            has_turn: r.2.has_turn,
            has_braking: r.2.has_braking,
            has_aggressive: r.2.has_aggressive,
            bin: r.2.bin(),
        }),
    )?;
    write_jsonl(
        &ctx.output("summaries.jsonl")?,
        clips.iter().zip(&results).map(|((id, _), r)| SummaryRecord {
            clip_id: id,
            summary: &r.0,
        }),
    )?;
    write_jsonl(
        &ctx.output("prompts.jsonl")?,
        clips.iter().zip(results).map(|((id, _), r)| PromptRecord {
            clip_id: id,
            encoding: encoding.as_str(),
            n_steps,
            text: r.3,
        }),
    )?;
    ctx.say(format!("labeled {} clips at alpha {}", clips.len(), th.alpha));
    Ok(())
}

#[derive(Serialize)]
struct QuestionBalance {
    labels: Vec<&'static str>,
    freq: Vec<f64>,
    target: Vec<f64>,
    max_abs_deviation: f64,
}

#[derive(Serialize)]
struct BalanceReport {
    n: usize,
    pool: usize,
    caps: balancer::SourceCaps,
    source_counts: BTreeMap<Source, usize>,
    max_deviation: f64,
    per_question: BTreeMap<Question, QuestionBalance>,
}

fn balance(ctx: &mut Ctx) -> Result<()> {
    let n = ctx
        .cfg
        .config
        .balance
        .n
        .ok_or_else(|| Invalid("`balance` needs `balance.n` in the config".into()))?;
    let caps = ctx.cfg.config.balance.caps;
    let labels = ctx.required(&ctx.cfg.config.labels.clone(), "labels")?;
    let (order, sets) = label_sets(&read_jsonl(&labels)?)?;
    let sources = match ctx.cfg.config.sources.clone() {
        Some(p) => Some(read_sources(&ctx.input(&p)?)?),
        None => None,
    };
    let pool = order
        .iter()
        .map(|id| {
            let source = match &sources {
                Some(s) => *s
                    .get(id)
                    .ok_or_else(|| Invalid(format!("clip `{id}` missing from sources")))?,
                None => Source::Real,
            };
            PoolClip::from_answer_set(id, source, &sets[id])
                .ok_or_else(|| Invalid(format!("clip `{id}` does not answer all 14 questions")).into())
        })
        .collect::<Result<Vec<_>>>()?;
    if n > pool.len() {
        bail!(Invalid(format!("asked for {n} clips from a pool of {}", pool.len())));
    }
    let targets = Targets::uniform_questions();
    let outcome = balancer::balance(&pool, n, caps, &targets).map_err(|e| Invalid(e.to_string()))?;

    let mut ids = outcome.selected.join("\n");
    ids.push('\n');
    std::fs::write(ctx.output("selected.txt")?, ids)?;
    let per_question = Question::ALL
        .iter()
        .zip(balancer::imbalance_report(&outcome.state, &targets))
        .map(|(q, r)| {
            (
                *q,
                QuestionBalance {
                    labels: q.answer_space().to_vec(),
                    freq: r.freq,
                    target: r.target,
                    max_abs_deviation: r.max_abs_deviation,
                },
            )
        })
        .collect();
    let max_deviation = balancer::max_deviation(&outcome.state, &targets);
    let report = BalanceReport {
        n,
        pool: pool.len(),
        caps,
        source_counts: [
            (Source::Real, outcome.state.source_counts[0]),
            (Source::Sim, outcome.state.source_counts[1]),
        ]
        .into_iter()
        .collect(),
        max_deviation,
        per_question,
    };
    write_json(&ctx.output("imbalance.json")?, &report)?;
    ctx.say(format!(
        "selected {n} of {} clips, max deviation {max_deviation:.4}",
        pool.len()
    ));
    Ok(())
}

fn evaluate(ctx: &mut Ctx) -> Result<()> {
    let th = ctx.thresholds_at_alpha()?;
    let rules = ctx.rules()?;
    let (_, truth) = ctx.truth(&th)?;
    let predictions = ctx.predictions()?;
    let mut csv = String::from("model,acc,bacc,f1,temporal_acc,temporal_f1,wpcr,pcov,parsable_rate\n");
    for (model, records) in &predictions {
        let preds = parsed_sets(model, records)?;
        let scores = score_model(&truth, &preds, &rules)?;
        let empty = AnswerSet::new();
        let consistency = truth
            .keys()
            .map(|clip| rules.clip(clip, preds.get(clip).unwrap_or(&empty)))
            .collect();
        let report = EvaluationReport::new(model, truth.len(), scores, consistency);
        let a = &report.aggregate;
        let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
        csv.push_str(&format!(
            "{model},{},{},{},{},{},{},{},{}\n",
            a.acc,
            a.bacc,
            a.f1,
            opt(a.temporal_acc),
            opt(a.temporal_f1),
            a.wpcr,
            a.pcov,
            a.parsable_rate
        ));
        ctx.say(format!(
            "{model}: bacc {:.4} acc {:.4} wpcr {:.4} parsable {}%",
            a.bacc,
            a.acc,
            a.wpcr,
            crate::encoding::fixed(a.parsable_rate * 100.0, 1)
        ));
        write_json(&ctx.output(&format!("reports/{}.json", file_safe(model)))?, &report)?;
    }
    std::fs::write(ctx.output("summary.csv")?, csv)?;
    Ok(())
}

/// Model names become file names; anything outside `[A-Za-z0-9._-]` maps to `_`.
pub fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "._-".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn sweep(ctx: &mut Ctx) -> Result<()> {
    let alphas = ctx.cfg.config.alphas.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
    if !alphas.contains(&1.0) {
        bail!(Invalid("the alpha list must contain 1.0".into()));
    }
    let th = ctx.thresholds()?;
    let clips = ctx.trajectories()?;
    let predictions = ctx.predictions()?;
    let preds = predictions
        .iter()
        .map(|(m, r)| Ok((m.clone(), parsed_sets(m, r)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let key = ctx.cfg.config.rank_key;
    let points = sensitivity_sweep(&clips, &preds, &th, &alphas, key)?;
    let min_tau = points
        .iter()
        .map(|p| p.kendall_tau_vs_nominal)
        .fold(f64::INFINITY, f64::min);
    let report = SweepReport {
        rank_key: key,
        alphas,
        models: preds.keys().cloned().collect(),
        points,
    };
    write_json(&ctx.output("sweep.json")?, &report)?;
    std::fs::write(ctx.output("sweep.csv")?, report.csv())?;
    ctx.say(format!(
        "swept {} alphas over {} models, min kendall tau {min_tau:.4}",
        report.alphas.len(),
        report.models.len()
    ));
    Ok(())
}

fn parse_cmd(ctx: &mut Ctx) -> Result<()> {
    let predictions = ctx.predictions()?;
    let mut parsed = Vec::new();
    let mut rates = BTreeMap::new();
    for (model, records) in &predictions {
        let results: Vec<_> = records
            .iter()
            .map(|r| parse(&r.response, r.question_id.answer_space()))
            .collect();
        let rate = ParseRate::from_results(&results);
        ctx.say(format!(
            "{model}: {}% parsable ({}/{})",
            rate.parsable_percent, rate.parsed, rate.total
        ));
        rates.insert(model.clone(), rate);
        parsed.extend(records.iter().zip(results).map(|(r, p)| ParsedPrediction {
            clip_id: r.clip_id.clone(),
            question_id: r.question_id,
            response: r.response.clone(),
            model: model.clone(),
            parsed: p.label,
            stage: p.stage,
        }));
    }
    write_jsonl(&ctx.output("parsed.jsonl")?, &parsed)?;
    write_json(&ctx.output("parse_rates.json")?, &rates)?;
    Ok(())
}

#[derive(Serialize, Default)]
struct Agreement {
    agree: usize,
    total: usize,
    rate: f64,
}

fn baseline(ctx: &mut Ctx) -> Result<()> {
    let kind = ctx.cfg.config.baseline;
    let clips = match ctx.cfg.config.trajectories {
        Some(_) => Some(ctx.trajectories()?),
        None => None,
    };
    let proxies = match (ctx.cfg.config.proxies.clone(), &clips) {
        (Some(p), _) => read_proxies(&ctx.input(&p)?)?,
        (None, Some(clips)) => {
            let gains = match kind {
                BaselineKind::VoLearned => ProxyGains::learned(),
                _ => ProxyGains::classical(),
            };
            let (noise, seed) = (ctx.cfg.config.proxy_noise, ctx.cfg.config.seed);
            let series: Vec<(String, ProxySeries)> = clips
                .par_iter()
                .enumerate()
                .map(|(i, (id, seq))| {
                    let (flow, odom) = synth_proxies(seq, &gains, noise, seed.wrapping_add(i as u64));
                    let s = match kind {
                        BaselineKind::Flow => ProxySeries::Flow(flow),
                        _ => ProxySeries::Odom(odom),
                    };
                    (id.clone(), s)
                })
                .collect();
            write_proxies(&ctx.output("proxies.jsonl")?, &series)?;
            series
        }
        (None, None) => bail!(Invalid(
            "`baseline` needs `proxies` or `trajectories` in the config".into()
        )),
    };

    let flow_th = FlowThresholds::default();
    let vo_th = match kind {
        BaselineKind::VoLearned => VoThresholds::learned(),
        _ => VoThresholds::classical(),
    };
    let answers = proxies
        .iter()
        .map(|(id, s)| {
            let results = match (kind, s) {
                (BaselineKind::Flow, ProxySeries::Flow(f)) => flow_answers(f, &flow_th),
                (BaselineKind::Vo | BaselineKind::VoLearned, ProxySeries::Odom(o)) => vo_answers(o, &vo_th),
                _ => bail!(Invalid(format!(
                    "clip `{id}`: proxy channels do not match baseline {kind:?}"
                ))),
            };
            Ok((id.clone(), results))
        })
        .collect::<Result<Vec<_>>>()?;
    write_jsonl(
        &ctx.output("baseline.jsonl")?,
        answers
            .iter()
            .flat_map(|(id, rs)| rs.iter().cloned().map(move |r| r.into_record(id))),
    )?;

    if let Some(clips) = clips {
        let th = ctx.thresholds_at_alpha()?;
        let oracle = oracle_sets(&clips, &th);
        let mut per_q: BTreeMap<Question, Agreement> = SUBSET.iter().map(|q| (*q, Agreement::default())).collect();
        for (id, rs) in &answers {
            let (Some(truth), base) = (oracle.get(id), to_answer_set(rs)) else {
                continue;
            };
            for q in SUBSET {
                let a = per_q.get_mut(&q).expect("subset");
                a.total += 1;
                a.agree += (truth.get(q) == base.get(q)) as usize;
            }
        }
        for a in per_q.values_mut() {
            a.rate = if a.total == 0 {
                0.0
            } else {
                a.agree as f64 / a.total as f64
            };
        }
        write_json(&ctx.output("agreement.json")?, &per_q)?;
    }
    ctx.say(format!("{kind:?} baseline answered {} clips", answers.len()));
    Ok(())
}

#[derive(Serialize)]
struct SpecRecord<'a> {
    clip_id: &'a str,
    spec: &'a ManeuverSpec,
}

fn synth(ctx: &mut Ctx) -> Result<()> {
    let s = &ctx.cfg.config.synth;
    let seed = ctx.cfg.config.seed;
    let clips = (0..s.count)
        .into_par_iter()
        .map(|i| {
            let mut spec = suite_spec(seed, i, &s.mix)
                .ok_or_else(|| Invalid(format!("no maneuver kind with positive weight fits clip {i}")))?;
            spec.noise = s.noise;
            Ok(generate(&suite_clip_id(i), &spec)?)
        })
        .collect::<Result<Vec<_>>>()?;

    let states: Vec<_> = clips.iter().map(|c| (c.clip_id.clone(), c.sequence.clone())).collect();
    write_states(&ctx.output("trajectories.jsonl")?, &states)?;
    write_jsonl(
        &ctx.output("expected.jsonl")?,
        clips.iter().flat_map(|c| {
            c.expected.iter().map(|(q, a)| LabelRecord {
                clip_id: c.clip_id.clone(),
                question_id: q,
                answer: a.to_string(),
            })
        }),
    )?;
    write_jsonl(
        &ctx.output("specs.jsonl")?,
        clips.iter().map(|c| SpecRecord {
            clip_id: &c.clip_id,
            spec: &c.spec,
        }),
    )?;
    let cov: BTreeMap<Question, BTreeMap<&str, usize>> = coverage(&clips)
        .into_iter()
        .map(|(q, counts)| (q, q.answer_space().iter().copied().zip(counts).collect()))
        .collect();
    write_json(&ctx.output("coverage.json")?, &cov)?;
    ctx.say(format!("generated {} clips", clips.len()));
    Ok(())
}

fn calibrate(ctx: &mut Ctx) -> Result<()> {
    let base = ctx.thresholds()?;
    let clips = ctx.trajectories()?;
    let summaries: Vec<_> = clips.par_iter().map(|(_, s)| summarize(s)).collect();
    let cfg = calibrate_thresholds(&summaries, &base).map_err(|e| Invalid(e.to_string()))?;
    write_json(&ctx.output("thresholds.json")?, &cfg)?;
    ctx.say(format!(
        "calibrated from {} clips: brake {:.3}/{:.3}/{:.3}, jerk {:.3}/{:.3}",
        clips.len(),
        cfg.brake_emergency,
        cfg.brake_moderate,
        cfg.brake_low,
        cfg.jerk_smooth,
        cfg.jerk_moderate
    ));
    Ok(())
}
