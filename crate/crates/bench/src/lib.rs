//! Benchmark driver for the hybrid HWENO solver: configuration, runs,
//! convergence tables and CSV output.

pub mod config;
pub mod output;
pub mod runner;

pub use config::{parse_config, RunConfig};
pub use runner::{execute, run_convergence, solve, Resolution, RunResult, TimeSettings};
