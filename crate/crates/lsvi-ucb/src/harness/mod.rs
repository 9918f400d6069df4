//! Experiment orchestration: configuration, seeded runs, exact-regret
//! bookkeeping, logical space metering, CPU timing, and CSV/JSON emission.
//!
//! The pieces:
//!
//! - [`config`]: the flat dotted-key config format and its canonical echo;
//! - [`space`]: the logical space meter (retained 64-bit scalar counts);
//! - [`runner`]: per-seed episode loops, parallel across seeds, plus the
//!   hyperparameter grid sweep;
//! - [`emit`]: the CSV/JSON schemas and the CSV parser;
//! - [`report`]: average-regret decay and `a·√k + b` fit summaries.

pub mod config;
pub mod emit;
pub mod report;
pub mod runner;
pub mod space;

pub use config::{EnvironmentSource, ExperimentConfig};
pub use emit::{csv_string, emit_csv, emit_json, json_string, parse_csv, CsvRow};
pub use report::{sublinearity_report, SublinearityReport};
pub use runner::{run_experiment, run_single, run_sweep, PolicyMode, RunResult, SweepGrid};
pub use space::{space_account, space_recount, SpaceMeter};

use crate::agents::Variant;

/// One episode's metrics row.
///
/// `cum_regret` is non-decreasing in `episode`; `logical_space` never falls
/// below `H·d²` (the always-present Gram inverses); `process_time_s` is the
/// cumulative CPU time of the run's thread up to the end of this episode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeRecord {
    /// Episode index `k`, 1-based.
    pub episode: u64,
    pub variant: Variant,
    /// Exact expected regret of this episode's policy, in `[0, H]`.
    pub regret: f64,
    pub cum_regret: f64,
    /// Retained 64-bit scalar count after planning, before absorbing this
    /// episode's data.
    pub logical_space: u64,
    pub process_time_s: f64,
    /// Number of steps `h` at which learning occurred this episode.
    pub learn_events: u64,
    /// Number of per-step workspace resets this episode.
    pub resets: u64,
}
