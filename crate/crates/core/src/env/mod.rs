//! Evaluation environments: the microreactor model (closed-form relations,
//! proxy or tabular neutronics, cost and constraints) and small analytic
//! test problems sharing the same contract.

mod hpmr;
mod proxy;
mod qoi;
pub mod relations;
mod tabular;
pub mod toy;

pub use hpmr::{evaluate, Evaluation, Evaluator, HpmrEnv};
pub use proxy::{proxy_eval, LogLinearModel, ProxyCoefficients, ProxyModelConfig};
pub use qoi::{Neutronics, QoIVector};
pub use tabular::{tabular_eval, Kernel, RbfInterpolator, SampleTable, TabularModel, Tail};

use alloc::vec::Vec;

use crate::error::Result;

/// Result of evaluating one unit-cube action.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Minimized objective values.
    pub objectives: Vec<f64>,
    pub feasible: bool,
    pub penalty: f64,
    /// Decoded design variables.
    pub design: Vec<f64>,
    pub qoi: Option<QoIVector>,
}

/// Anything the optimizers can query. Implementations are immutable and
/// may be shared between workers.
pub trait Environment: Send + Sync {
    /// Dimension of the unit-cube action space.
    fn dim(&self) -> usize;
    fn objectives(&self) -> usize;
    fn evaluate(&self, u: &[f64]) -> Result<Outcome>;
}

impl<E: Environment + ?Sized> Environment for &E {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn objectives(&self) -> usize {
        (**self).objectives()
    }
    fn evaluate(&self, u: &[f64]) -> Result<Outcome> {
        (**self).evaluate(u)
    }
}

impl<E: Environment + ?Sized> Environment for alloc::sync::Arc<E> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn objectives(&self) -> usize {
        (**self).objectives()
    }
    fn evaluate(&self, u: &[f64]) -> Result<Outcome> {
        (**self).evaluate(u)
    }
}
