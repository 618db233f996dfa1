//! Parallel Monte Carlo driver, CSV/JSON output and the `relaycap` command
//! line on top of `relaycap-core`.

pub mod cli;
pub mod grid;
pub mod output;
pub mod parallel;
pub mod tables;

pub use relaycap_core as core;
