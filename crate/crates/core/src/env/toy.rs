//! Analytic problems used to exercise the optimizers.

use alloc::vec;
use alloc::vec::Vec;

use super::{Environment, Outcome};
use crate::constraints::{ConstraintSet, ConstraintSpec, Direction};
use crate::error::{Error, Result};

/// Two squared distances to anchor points in the unit square, with the
/// at-most constraint `u0 + u1 <= limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereToy {
    pub anchors: [[f64; 2]; 2],
    pub constraints: ConstraintSet,
}

impl SphereToy {
    pub fn new(limit: f64) -> Self {
        SphereToy {
            anchors: [[0.2, 0.2], [0.8, 0.8]],
            constraints: ConstraintSet {
                constraints: vec![ConstraintSpec::new("sum", "sum", Direction::AtMost { limit })],
            },
        }
    }

    /// Unconstrained variant: every point is feasible.
    pub fn unconstrained() -> Self {
        SphereToy {
            anchors: [[0.2, 0.2], [0.8, 0.8]],
            constraints: ConstraintSet {
                constraints: Vec::new(),
            },
        }
    }
}

impl Default for SphereToy {
    fn default() -> Self {
        Self::new(1.5)
    }
}

impl Environment for SphereToy {
    fn dim(&self) -> usize {
        2
    }

    fn objectives(&self) -> usize {
        2
    }

    fn evaluate(&self, u: &[f64]) -> Result<Outcome> {
        check_cube(u, 2)?;
        let f = |a: &[f64; 2]| (u[0] - a[0]) * (u[0] - a[0]) + (u[1] - a[1]) * (u[1] - a[1]);
        let report = self.constraints.evaluate(&[("sum", u[0] + u[1])])?;
        Ok(Outcome {
            objectives: vec![f(&self.anchors[0]), f(&self.anchors[1])],
            feasible: report.feasible,
            penalty: report.penalty,
            design: u.to_vec(),
            qoi: None,
        })
    }
}

/// ZDT1: convex front `f2 = 1 - sqrt(f1)` at `u[1..] = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zdt1 {
    pub dim: usize,
}

impl Zdt1 {
    /// Hypervolume of the true front against reference `(r, r)`, `r >= 1`.
    pub fn optimal_hypervolume(r: f64) -> f64 {
        // integral over f1 in [0, 1] of (r - 1 + sqrt(f1)) plus the strip f1 in [1, r]
        (r - 1.0) + 2.0 / 3.0 + (r - 1.0) * r
    }
}

impl Environment for Zdt1 {
    fn dim(&self) -> usize {
        self.dim
    }

    fn objectives(&self) -> usize {
        2
    }

    fn evaluate(&self, u: &[f64]) -> Result<Outcome> {
        check_cube(u, self.dim)?;
        let f1 = u[0];
        let g = 1.0 + 9.0 * u[1..].iter().sum::<f64>() / (self.dim - 1) as f64;
        let f2 = g * (1.0 - libm::sqrt(f1 / g));
        Ok(Outcome {
            objectives: vec![f1, f2],
            feasible: true,
            penalty: 0.0,
            design: u.to_vec(),
            qoi: None,
        })
    }
}

fn check_cube(u: &[f64], dim: usize) -> Result<()> {
    if u.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: u.len(),
        });
    }
    for (index, &value) in u.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Decode { index, value });
        }
    }
    Ok(())
}
