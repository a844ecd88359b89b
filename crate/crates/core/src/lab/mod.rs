//! Experiment harness: configuration, content-addressed caching and
//! deterministic record emission.

pub mod cache;
pub mod config;
pub mod record;
pub mod report;
pub mod run;

pub use config::{BoundsTable, Command, ExperimentConfig, Format, PointSpec};
pub use record::{ResultRecord, SortKey, SCHEMA_VERSION};
pub use run::{execute, exit_code, run, RunOutcome};
