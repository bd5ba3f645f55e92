//! Constraint limits and the weighted quadratic relative-violation penalty.
//!
//! Each constraint contributes `weight * ((x - c) / c)^2` when the quantity
//! lies on the violating side of its limit `c`, and nothing otherwise. For a
//! range the violated endpoint plays the role of `c`. Squaring keeps the term
//! sign-safe for negative limits such as the shutdown margin.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default weight of every constraint term.
pub const DEFAULT_WEIGHT: f64 = 10_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "direction", rename_all = "kebab-case")]
pub enum Direction {
    AtMost { limit: f64 },
    AtLeast { limit: f64 },
    Range { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub name: String,
    /// Key of the constrained quantity, e.g. `sdm`.
    pub quantity: String,
    #[serde(flatten)]
    pub direction: Direction,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_weight() -> f64 {
    DEFAULT_WEIGHT
}

impl ConstraintSpec {
    pub fn new(name: &str, quantity: &str, direction: Direction) -> Self {
        ConstraintSpec {
            name: name.to_string(),
            quantity: quantity.to_string(),
            direction,
            weight: DEFAULT_WEIGHT,
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn check(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidConstraint {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        if !(self.weight > 0.0 && self.weight.is_finite()) {
            return Err(invalid("weight must be positive"));
        }
        match self.direction {
            Direction::AtMost { limit } | Direction::AtLeast { limit } => {
                if limit == 0.0 {
                    return Err(Error::ZeroLimit(self.name.clone()));
                }
            }
            Direction::Range { lo, hi } => {
                if lo == 0.0 || hi == 0.0 {
                    return Err(Error::ZeroLimit(self.name.clone()));
                }
                if !(lo < hi) {
                    return Err(invalid("range needs lo < hi"));
                }
            }
        }
        Ok(())
    }

    /// Unweighted violation measure of `x`.
    pub fn phi(&self, x: f64) -> Result<f64> {
        self.check()?;
        let relative = |c: f64| {
            let r = (x - c) / c;
            r * r
        };
        Ok(match self.direction {
            Direction::AtMost { limit } if x > limit => relative(limit),
            Direction::AtLeast { limit } if x < limit => relative(limit),
            Direction::Range { lo, .. } if x < lo => relative(lo),
            Direction::Range { hi, .. } if x > hi => relative(hi),
            _ => 0.0,
        })
    }
}

/// Convenience wrapper for [`ConstraintSpec::phi`].
pub fn phi(spec: &ConstraintSpec, x: f64) -> Result<f64> {
    spec.phi(x)
}

/// Source of named quantities for constraint evaluation.
pub trait Quantities {
    fn quantity(&self, name: &str) -> Option<f64>;
}

impl Quantities for [(&str, f64)] {
    fn quantity(&self, name: &str) -> Option<f64> {
        self.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

impl<const N: usize> Quantities for [(&str, f64); N] {
    fn quantity(&self, name: &str) -> Option<f64> {
        self.as_slice().quantity(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintTerm {
    pub name: String,
    pub value: f64,
    pub phi: f64,
    pub weighted: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub terms: Vec<ConstraintTerm>,
    pub penalty: f64,
    pub feasible: bool,
}

impl ConstraintReport {
    pub fn feasible() -> Self {
        ConstraintReport {
            terms: Vec::new(),
            penalty: 0.0,
            feasible: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub constraints: Vec<ConstraintSpec>,
}

impl ConstraintSet {
    pub fn new(constraints: Vec<ConstraintSpec>) -> Result<Self> {
        for c in &constraints {
            c.check()?;
        }
        Ok(ConstraintSet { constraints })
    }

    /// Peak heat flux, peaking factor, shutdown margin and fuel lifetime
    /// limits of the microreactor study, all weighted 10,000.
    pub fn hpmr_default() -> Self {
        ConstraintSet {
            constraints: alloc::vec![
                ConstraintSpec::new("q_max", "q_max", Direction::AtMost { limit: 0.025 }),
                ConstraintSpec::new("f_dh", "f_dh", Direction::AtMost { limit: 1.47 }),
                ConstraintSpec::new("sdm", "sdm", Direction::AtMost { limit: -6700.0 }),
                ConstraintSpec::new("lifetime", "lifetime", Direction::Range { lo: 6.0, hi: 10.40 }),
            ],
        }
    }

    pub fn evaluate<Q: Quantities + ?Sized>(&self, qoi: &Q) -> Result<ConstraintReport> {
        let mut terms = Vec::with_capacity(self.constraints.len());
        let mut penalty = 0.0;
        for spec in &self.constraints {
            let value = qoi
                .quantity(&spec.quantity)
                .ok_or_else(|| Error::MissingQuantity(spec.name.clone()))?;
            let phi = spec.phi(value)?;
            let weighted = spec.weight * phi;
            penalty += weighted;
            terms.push(ConstraintTerm {
                name: spec.name.clone(),
                value,
                phi,
                weighted,
                satisfied: phi == 0.0,
            });
        }
        let feasible = terms.iter().all(|t| t.satisfied);
        Ok(ConstraintReport {
            terms,
            penalty,
            feasible,
        })
    }
}

impl Default for ConstraintSet {
    fn default() -> Self {
        Self::hpmr_default()
    }
}

/// Evaluates `set` against `qoi`.
pub fn evaluate_constraints<Q: Quantities + ?Sized>(set: &ConstraintSet, qoi: &Q) -> Result<ConstraintReport> {
    set.evaluate(qoi)
}
