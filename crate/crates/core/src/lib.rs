#![no_std]

//! Constrained two-objective design optimization for heat-pipe microreactors.
//!
//! This crate holds the allocation-only core: the design space, Pareto
//! ranking and the bounded rank-reward archive, the constraint penalty, the
//! closed-form and proxy physics, the levelized-cost engine, the
//! policy-gradient optimizer, the NSGA-II baseline and the quality
//! indicators. File formats, configuration and the command line live in the
//! `hpmr` companion crate.

extern crate alloc;

pub mod constraints;
pub mod design;
pub mod econ;
pub mod env;
pub mod error;
pub mod metrics;
pub mod nsga2;
pub mod pareto;
pub mod pearl;

mod linalg;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use constraints::{ConstraintReport, ConstraintSet, ConstraintSpec, Direction};
pub use design::{DesignBounds, DesignVector, Violation};
pub use econ::{CashFlowSchedule, CostBreakdown, CostScenario, EconParams};
pub use env::{Environment, Outcome};
pub use error::{Error, Result};
pub use metrics::{hypervolume_2d, FrontPoint, FrontReport};
pub use pareto::{DistanceMetric, ObjectivePoint, ParetoBuffer};
