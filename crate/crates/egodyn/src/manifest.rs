//! Reproducibility manifest written next to every run's outputs.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub egodyn_version: String,
    pub egodyn_core_version: String,
    /// SHA-256 of the effective config (file plus overrides) as compact JSON.
    pub config_sha256: String,
    pub seed: u64,
    /// Input path as configured → SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    /// Output path relative to the output directory → SHA-256.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("hashing {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}
