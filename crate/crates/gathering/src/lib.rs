//! Standard-library companion to `gathering-core`: JSON run configs,
//! JSONL traces, parallel sweeps and the check suites used by the
//! `gathering` command-line tool.

pub mod checks;
pub mod config;
pub mod sweep;
pub mod trace;

pub use config::{ConfigError, RunConfig};
