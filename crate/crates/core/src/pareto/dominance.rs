use super::ObjectivePoint;
use crate::error::{Error, Result};

/// Constrained dominance: feasible beats infeasible, infeasible points
/// compare by penalty, feasible points by Pareto dominance.
pub fn dominates(a: &ObjectivePoint, b: &ObjectivePoint) -> Result<bool> {
    if a.objectives.len() != b.objectives.len() {
        return Err(Error::Dimension {
            expected: a.objectives.len(),
            got: b.objectives.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

/// [`dominates`] without the dimension check.
pub fn dominates_unchecked(a: &ObjectivePoint, b: &ObjectivePoint) -> bool {
    match (a.feasible, b.feasible) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.penalty < b.penalty,
        (true, true) => pareto_dominates(&a.objectives, &b.objectives),
    }
}

pub(crate) fn pareto_dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}
