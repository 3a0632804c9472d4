//! Run configuration: one JSON document per run, plus command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use egodyn_core::balancer::SourceCaps;
use egodyn_core::kinematics::{SmoothingConfig, DEFAULT_RATE_HZ, DEFAULT_WINDOW_S};
use egodyn_core::metrics::RankKey;
use egodyn_core::synth::{NoiseSpec, RegimeMix};
use serde::{Deserialize, Serialize};

use crate::encoding::Encoding;
use crate::Invalid;

pub const DEFAULT_ALPHAS: [f64; 5] = [0.5, 0.75, 1.0, 1.25, 1.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Label,
    Balance,
    Evaluate,
    Sweep,
    Parse,
    Baseline,
    Synth,
    CalibrateThresholds,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Label => "label",
            Command::Balance => "balance",
            Command::Evaluate => "evaluate",
            Command::Sweep => "sweep",
            Command::Parse => "parse",
            Command::Baseline => "baseline",
            Command::Synth => "synth",
            Command::CalibrateThresholds => "calibrate-thresholds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    #[default]
    Flow,
    Vo,
    VoLearned,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BalanceConfig {
    /// Clips to select.
    pub n: Option<usize>,
    pub caps: SourceCaps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub count: usize,
    pub mix: RegimeMix,
    pub noise: NoiseSpec,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            count: 200,
            mix: RegimeMix::default(),
            noise: NoiseSpec::default(),
        }
    }
}

/// Paths are relative to the directory holding the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Threshold document; built-in defaults when absent.
    pub thresholds: Option<PathBuf>,
    /// Consistency rule table; R1-R10 when absent.
    pub rules: Option<PathBuf>,
    pub rate_hz: f64,
    pub window_s: f64,
    pub smoothing: SmoothingConfig,
    pub trajectories: Option<PathBuf>,
    /// Ground-truth or oracle label records.
    pub labels: Option<PathBuf>,
    pub predictions: Vec<PathBuf>,
    /// `clip_id,source` CSV for balancing.
    pub sources: Option<PathBuf>,
    pub proxies: Option<PathBuf>,
    pub baseline: BaselineKind,
    /// Noise level when proxies are synthesized from trajectories.
    pub proxy_noise: f64,
    pub balance: BalanceConfig,
    pub synth: SynthConfig,
    pub alphas: Option<Vec<f64>>,
    pub rank_key: RankKey,
    pub encoding: Encoding,
    pub n_steps: usize,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            thresholds: None,
            rules: None,
            rate_hz: DEFAULT_RATE_HZ,
            window_s: DEFAULT_WINDOW_S,
            smoothing: SmoothingConfig::default(),
            trajectories: None,
            labels: None,
            predictions: Vec::new(),
            sources: None,
            proxies: None,
            baseline: BaselineKind::default(),
            proxy_noise: 0.0,
            balance: BalanceConfig::default(),
            synth: SynthConfig::default(),
            alphas: None,
            rank_key: RankKey::default(),
            encoding: Encoding::default(),
            n_steps: 10,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

/// Values given on the command line win over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alphas: Option<Vec<f64>>,
    pub encoding: Option<Encoding>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// A loaded config and the directory its relative paths hang off.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn load(path: &Path, overrides: Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let config: RunConfig =
            serde_json::from_str(&text).map_err(|e| Invalid(format!("config {}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self::new(config, base_dir).with_overrides(overrides))
    }

    pub fn new(config: RunConfig, base_dir: PathBuf) -> Self {
        Self { config, base_dir }
    }

    pub fn with_overrides(mut self, o: Overrides) -> Self {
        if let Some(a) = o.alphas {
            self.config.alphas = Some(a);
        }
        if let Some(e) = o.encoding {
            self.config.encoding = e;
        }
        if let Some(s) = o.seed {
            self.config.seed = s;
        }
        if let Some(out) = o.out {
            // given relative to the working directory, not the config
            self.config.out = std::path::absolute(&out).unwrap_or(out);
        }
        self
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        self.base_dir.join(p)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.resolve(&self.config.out)
    }

    /// Required input path for `command`, resolved.
    pub fn require(&self, p: &Option<PathBuf>, field: &str, command: Command) -> Result<PathBuf> {
        match p {
            Some(p) => Ok(self.resolve(p)),
            None => Err(Invalid(format!("`{}` needs `{field}` in the config", command.as_str())).into()),
        }
    }
}

/// Parses `0.5,0.75,1.0`.
pub fn parse_alphas(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|a| {
            let v: f64 = a.trim().parse().map_err(|_| format!("bad alpha `{a}`"))?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(format!("alpha must be positive, got {v}"))
            }
        })
        .collect()
}
