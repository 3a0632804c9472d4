//! File formats, prompt encodings, reports and command dispatch for the
//! `egodyn` tool. The analysis itself lives in `egodyn-core`.

pub mod config;
pub mod encoding;
pub mod formats;
pub mod manifest;
pub mod report;
pub mod run;

pub use config::{Command, LoadedConfig, Overrides, RunConfig};
pub use run::{run, RunOutcome};

/// A problem with the user's configuration or inputs, as opposed to an
/// internal failure. Exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Invalid(pub String);
