//! Experiment plumbing around the `aggfp` learners: configuration files,
//! the builtin perturbed rock-paper-scissors game, CSV series output and a
//! randomized FP versus agg-FP equivalence suite.

pub mod config;
pub mod csv;
pub mod error;
pub mod experiment;
pub mod games;
pub mod suite;

pub use config::{AlgorithmKind, ExperimentConfig, GameSpec, NeTarget};
pub use csv::{emit_csv, format_significant};
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, run_one, ExperimentReport, RunSeries, MANIFEST_NAME};
pub use games::{build_game, build_rps4, game_info};
pub use suite::{equivalence_suite, SuiteConfig, SuiteReport};
