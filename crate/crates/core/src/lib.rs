//! Deterministic ego-motion semantics.
//!
//! Turns kinematic state logs into categorical answers for fourteen driving
//! questions, checks sets of answers against physical implication rules, scores
//! free-text predictions and balances benchmark pools. Everything here is a pure
//! function of its inputs; file formats and the command line live in the `egodyn`
//! crate.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod balancer;
pub mod baselines;
pub mod consistency;
pub mod kinematics;
pub mod metrics;
pub mod oracle;
pub mod parser;
pub mod question;
pub mod synth;

mod math;
mod stats;

pub use question::{AnswerSet, Question};
pub use stats::{mean, percentile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
