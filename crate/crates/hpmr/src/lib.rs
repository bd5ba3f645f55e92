//! Configuration, file formats, plots and threaded runs for the
//! heat-pipe microreactor optimizer. The `hpmr` binary wraps this library.

pub mod config;
pub mod error;
pub mod formats;
pub mod plot;
pub mod runner;

pub use config::{EvaluatorSpec, OptimizerKind, Overrides, RunConfig, ScenarioFile};
pub use error::{exit, Error, Result};
pub use runner::{execute, write_run, Manifest, RunResult, RunStatus};
