//! Record files: JSON Lines everywhere, CSV accepted for trajectories and
//! the source manifest.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use egodyn_core::balancer::Source;
use egodyn_core::baselines::{FlowChannels, FlowProxySeries, OdomChannels, OdomProxySeries};
use egodyn_core::kinematics::{
    derive_from_speed, derive_states, resample_speed_uniform, resample_uniform, PoseSample, SmoothingConfig,
    SpeedSample, StateChannels, StateSequence,
};
use egodyn_core::parser::ParseStage;
use egodyn_core::Question;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Reads one JSON value per non-blank line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?;
        out.push(value);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: impl IntoIterator<Item = T>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, &r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A whole clip on one line; round-trips exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub clip_id: String,
    #[serde(flatten)]
    pub channels: StateChannels,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseLine {
    clip_id: Option<String>,
    t: f64,
    x: f64,
    y: f64,
    heading: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpeedLine {
    clip_id: Option<String>,
    t: f64,
    v: f64,
    omega: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum TrajectoryLine {
    State(StateRecord),
    Pose(PoseLine),
    Speed(SpeedLine),
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    clip_id: Option<String>,
    t: f64,
    x: Option<f64>,
    y: Option<f64>,
    heading: Option<f64>,
    v: Option<f64>,
    omega: Option<f64>,
}

impl CsvRow {
    fn into_line(self, row: usize) -> Result<TrajectoryLine> {
        let CsvRow {
            clip_id,
            t,
            x,
            y,
            heading,
            v,
            omega,
        } = self;
        match (x, y, heading, v, omega) {
            (Some(x), Some(y), Some(heading), None, None) => Ok(TrajectoryLine::Pose(PoseLine {
                clip_id,
                t,
                x,
                y,
                heading,
            })),
            (None, None, None, Some(v), Some(omega)) => Ok(TrajectoryLine::Speed(SpeedLine { clip_id, t, v, omega })),
            _ => bail!("row {row}: need either x,y,heading or v,omega"),
        }
    }
}

/// Resampling and smoothing applied to raw logs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ingest {
    pub rate_hz: f64,
    pub window_s: f64,
    pub smoothing: SmoothingConfig,
}

enum Group {
    State(StateChannels),
    Pose(Vec<PoseSample>),
    Speed(Vec<SpeedSample>),
}

/// Loads every clip of a trajectory file, in order of first appearance.
///
/// `.csv` files are read as CSV, anything else as JSON Lines. Lines without
/// `clip_id` belong to a clip named after the file stem.
pub fn read_trajectories(path: &Path, ingest: &Ingest) -> Result<Vec<(String, StateSequence)>> {
    let lines: Vec<TrajectoryLine> = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let mut reader = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
        reader
            .deserialize::<CsvRow>()
            .enumerate()
            .map(|(i, row)| {
                row.with_context(|| format!("{}: row {}", path.display(), i + 1))?
                    .into_line(i + 1)
            })
            .collect::<Result<_>>()?
    } else {
        read_jsonl(path)?
    };
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();

    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Group> = BTreeMap::new();
    for line in lines {
        let (id, line) = match line {
            TrajectoryLine::State(r) => (Some(r.clip_id.clone()), TrajectoryLine::State(r)),
            TrajectoryLine::Pose(p) => (p.clip_id.clone(), TrajectoryLine::Pose(p)),
            TrajectoryLine::Speed(s) => (s.clip_id.clone(), TrajectoryLine::Speed(s)),
        };
        let id = id.unwrap_or_else(|| stem.clone());
        if !groups.contains_key(&id) {
            order.push(id.clone());
        }
        match (groups.get_mut(&id), line) {
            (None, TrajectoryLine::State(r)) => {
                groups.insert(id, Group::State(r.channels));
            }
            (None, TrajectoryLine::Pose(p)) => {
                groups.insert(id, Group::Pose(vec![pose(&p)]));
            }
            (None, TrajectoryLine::Speed(s)) => {
                groups.insert(id, Group::Speed(vec![speed(&s)]));
            }
            (Some(Group::Pose(v)), TrajectoryLine::Pose(p)) => v.push(pose(&p)),
            (Some(Group::Speed(v)), TrajectoryLine::Speed(s)) => v.push(speed(&s)),
            (Some(Group::State(_)), TrajectoryLine::State(_)) => bail!("clip `{id}` has more than one state record"),
            _ => bail!("clip `{id}` mixes trajectory formats"),
        }
    }

    order
        .into_iter()
        .map(|id| {
            let group = groups.remove(&id).expect("grouped above");
            let seq = match group {
                Group::State(ch) => StateSequence::new(ch).map_err(anyhow::Error::from),
                Group::Pose(samples) => resample_uniform(&samples, ingest.rate_hz, ingest.window_s)
                    .and_then(|grid| derive_states(&grid, &ingest.smoothing))
                    .map_err(anyhow::Error::from),
                Group::Speed(samples) => resample_speed_uniform(&samples, ingest.rate_hz, ingest.window_s)
                    .and_then(|grid| derive_from_speed(&grid, &ingest.smoothing, 0.0))
                    .map_err(anyhow::Error::from),
            }
            .with_context(|| format!("clip `{id}` in {}", path.display()))?;
            Ok((id, seq))
        })
        .collect()
}

fn pose(p: &PoseLine) -> PoseSample {
    PoseSample {
        t: p.t,
        x: p.x,
        y: p.y,
        heading: p.heading,
    }
}

fn speed(s: &SpeedLine) -> SpeedSample {
    SpeedSample {
        t: s.t,
        v: s.v,
        omega: s.omega,
    }
}

pub fn write_states(path: &Path, clips: &[(String, StateSequence)]) -> Result<()> {
    write_jsonl(
        path,
        clips.iter().map(|(id, seq)| StateRecord {
            clip_id: id.clone(),
            channels: seq.channels().clone(),
        }),
    )
}

/// One answer. Oracle records carry extra fields, which are ignored here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub clip_id: String,
    pub question_id: Question,
    pub answer: String,
}

/// Raw model output for one (clip, question).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub clip_id: String,
    pub question_id: Question,
    pub response: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
}

/// [`PredictionRecord`] after parsing; `parsed` is null when unparsed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedPrediction {
    pub clip_id: String,
    pub question_id: Question,
    pub response: String,
    pub model: String,
    pub parsed: Option<String>,
    pub stage: ParseStage,
}

/// Predictions from several files, keyed by model. A record without
/// `model` belongs to a model named after its file stem.
pub fn read_predictions(paths: &[impl AsRef<Path>]) -> Result<BTreeMap<String, Vec<PredictionRecord>>> {
    let mut out: BTreeMap<String, Vec<PredictionRecord>> = BTreeMap::new();
    for path in paths {
        let path = path.as_ref();
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        for r in read_jsonl::<PredictionRecord>(path)? {
            let model = r.model.clone().unwrap_or_else(|| stem.clone());
            out.entry(model).or_default().push(r);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowLine {
    clip_id: Option<String>,
    t: f64,
    s_turn: f64,
    s_exp: f64,
    m_mag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OdomLine {
    clip_id: Option<String>,
    t: f64,
    m_disp: f64,
    theta_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ProxyLine {
    Flow(FlowLine),
    Odom(OdomLine),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProxySeries {
    Flow(FlowProxySeries),
    Odom(OdomProxySeries),
}

/// Per-frame-pair proxy lines grouped into one series per clip.
pub fn read_proxies(path: &Path) -> Result<Vec<(String, ProxySeries)>> {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut order: Vec<String> = Vec::new();
    let mut flows: BTreeMap<String, FlowChannels> = BTreeMap::new();
    let mut odoms: BTreeMap<String, OdomChannels> = BTreeMap::new();
    for line in read_jsonl::<ProxyLine>(path)? {
        match line {
            ProxyLine::Flow(l) => {
                let id = l.clip_id.unwrap_or_else(|| stem.clone());
                if odoms.contains_key(&id) {
                    bail!("clip `{id}` mixes flow and odometry proxies");
                }
                let ch = flows.entry(id.clone()).or_insert_with(|| {
                    order.push(id);
                    FlowChannels {
                        t: vec![],
                        s_turn: vec![],
                        s_exp: vec![],
                        m_mag: vec![],
                    }
                });
                ch.t.push(l.t);
                ch.s_turn.push(l.s_turn);
                ch.s_exp.push(l.s_exp);
                ch.m_mag.push(l.m_mag);
            }
            ProxyLine::Odom(l) => {
                let id = l.clip_id.unwrap_or_else(|| stem.clone());
                if flows.contains_key(&id) {
                    bail!("clip `{id}` mixes flow and odometry proxies");
                }
                let ch = odoms.entry(id.clone()).or_insert_with(|| {
                    order.push(id);
                    OdomChannels {
                        t: vec![],
                        m_disp: vec![],
                        theta_deg: vec![],
                    }
                });
                ch.t.push(l.t);
                ch.m_disp.push(l.m_disp);
                ch.theta_deg.push(l.theta_deg);
            }
        }
    }
    order
        .into_iter()
        .map(|id| {
            let series = if let Some(ch) = flows.remove(&id) {
                ProxySeries::Flow(FlowProxySeries::new(ch).with_context(|| format!("clip `{id}`"))?)
            } else {
                let ch = odoms.remove(&id).expect("grouped above");
                ProxySeries::Odom(OdomProxySeries::new(ch).with_context(|| format!("clip `{id}`"))?)
            };
            Ok((id, series))
        })
        .collect()
}

/// One line per frame pair, tagged with the clip.
pub fn write_proxies(path: &Path, clips: &[(String, ProxySeries)]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    for (id, series) in clips {
        match series {
            ProxySeries::Flow(s) => {
                let c = s.channels();
                for i in 0..c.t.len() {
                    let line = FlowLine {
                        clip_id: Some(id.clone()),
                        t: c.t[i],
                        s_turn: c.s_turn[i],
                        s_exp: c.s_exp[i],
                        m_mag: c.m_mag[i],
                    };
                    serde_json::to_writer(&mut w, &line)?;
                    w.write_all(b"\n")?;
                }
            }
            ProxySeries::Odom(s) => {
                let c = s.channels();
                for i in 0..c.t.len() {
                    let line = OdomLine {
                        clip_id: Some(id.clone()),
                        t: c.t[i],
                        m_disp: c.m_disp[i],
                        theta_deg: c.theta_deg[i],
                    };
                    serde_json::to_writer(&mut w, &line)?;
                    w.write_all(b"\n")?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct SourceRow {
    clip_id: String,
    source: Source,
}

/// `clip_id,source` CSV with `source` one of `real`, `sim`.
pub fn read_sources(path: &Path) -> Result<BTreeMap<String, Source>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = BTreeMap::new();
    for (i, row) in reader.deserialize::<SourceRow>().enumerate() {
        let row = row.with_context(|| format!("{}: row {}", path.display(), i + 1))?;
        if out.insert(row.clip_id.clone(), row.source).is_some() {
            bail!("{}: clip `{}` listed twice", path.display(), row.clip_id);
        }
    }
    Ok(out)
}
