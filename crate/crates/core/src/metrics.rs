//! Front quality indicators and the reporting types shared by the
//! optimizers.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::ObjectivePoint;

/// Exact dominated area of a two-objective front (minimization) against
/// `reference`. Dominated or duplicate members are tolerated and add
/// nothing; a point that exceeds the reference in either objective is an
/// error naming its index.
pub fn hypervolume_2d(front: &[[f64; 2]], reference: [f64; 2]) -> Result<f64> {
    for (index, p) in front.iter().enumerate() {
        if !(p[0] <= reference[0] && p[1] <= reference[1]) {
            return Err(Error::BeyondReference { index });
        }
    }
    let mut pts: Vec<[f64; 2]> = front.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut ceiling = reference[1];
    for p in pts {
        if p[1] < ceiling {
            area += (reference[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    Ok(area)
}

/// Per-objective maximum over every point, pushed out by 10% of its
/// magnitude (`max * 1.1` for positive objectives).
pub fn default_reference<'a, I>(points: I) -> Option<[f64; 2]>
where
    I: IntoIterator<Item = &'a [f64; 2]>,
{
    let mut it = points.into_iter();
    let first = *it.next()?;
    let max = it.fold(first, |m, p| [m[0].max(p[0]), m[1].max(p[1])]);
    Some([max[0] + 0.1 * max[0].abs(), max[1] + 0.1 * max[1].abs()])
}

/// Indices of the mutually non-dominated members of `points`, sorted by the
/// first objective then the second. Exact duplicates keep only the earliest.
pub fn nondominated_indices(points: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
            .then(a.cmp(&b))
    });
    let mut keep = Vec::new();
    let mut best = f64::INFINITY;
    for i in idx {
        if points[i][1] < best {
            keep.push(i);
            best = points[i][1];
        }
    }
    keep
}

/// One archived solution as exported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    /// Producing agent (0 for single-population optimizers).
    pub agent: usize,
    pub id: u64,
    pub objectives: [f64; 2],
    pub feasible: bool,
    pub penalty: f64,
    pub design: Vec<f64>,
}

impl FrontPoint {
    pub fn from_objective_point(agent: usize, p: &ObjectivePoint) -> Self {
        FrontPoint {
            agent,
            id: p.id,
            objectives: [p.objectives[0], p.objectives[1]],
            feasible: p.feasible,
            penalty: p.penalty,
            design: p.design.clone(),
        }
    }
}

/// Feasible non-dominated union of several point sets, sorted by the first
/// objective. Among identical objective vectors the first one offered wins.
pub fn merge_fronts<'a, I>(sets: I) -> Vec<FrontPoint>
where
    I: IntoIterator<Item = &'a [FrontPoint]>,
{
    let pool: Vec<&FrontPoint> = sets
        .into_iter()
        .flat_map(|s| s.iter())
        .filter(|p| p.feasible)
        .collect();
    let objs: Vec<[f64; 2]> = pool.iter().map(|p| p.objectives).collect();
    nondominated_indices(&objs).into_iter().map(|i| pool[i].clone()).collect()
}

/// A labelled set of points with its quality indicators. The hypervolume
/// covers the feasible non-dominated subset only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontReport {
    pub label: String,
    pub points: Vec<FrontPoint>,
    pub reference: [f64; 2],
    pub hypervolume: f64,
    pub feasible_count: usize,
}

impl FrontReport {
    /// Builds the report; without an explicit reference the default rule is
    /// applied to the points themselves.
    pub fn new(label: impl Into<String>, points: Vec<FrontPoint>, reference: Option<[f64; 2]>) -> Result<Self> {
        let feasible: Vec<[f64; 2]> = points.iter().filter(|p| p.feasible).map(|p| p.objectives).collect();
        let reference = match reference {
            Some(r) => r,
            None => default_reference(points.iter().map(|p| &p.objectives)).unwrap_or([0.0, 0.0]),
        };
        let hypervolume = if feasible.is_empty() {
            0.0
        } else {
            hypervolume_2d(&feasible, reference)?
        };
        Ok(FrontReport {
            label: label.into(),
            feasible_count: feasible.len(),
            points,
            reference,
            hypervolume,
        })
    }

    /// Feasible point minimizing objective `k` (ties: lower second key).
    pub fn best(&self, k: usize) -> Option<&FrontPoint> {
        let o = 1 - k;
        self.points.iter().filter(|p| p.feasible).min_by(|a, b| {
            a.objectives[k]
                .partial_cmp(&b.objectives[k])
                .unwrap_or(Ordering::Equal)
                .then(a.objectives[o].partial_cmp(&b.objectives[o]).unwrap_or(Ordering::Equal))
        })
    }
}

/// One optimizer step as logged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub agent: usize,
    pub step: usize,
    pub reward: f64,
    pub feasible: bool,
    pub penalty: f64,
    pub objectives: [f64; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn unit_square() {
        assert_eq!(hypervolume_2d(&[[0.0, 0.0]], [1.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn two_point_staircase() {
        assert_eq!(hypervolume_2d(&[[0.0, 1.0], [1.0, 0.0]], [2.0, 2.0]).unwrap(), 3.0);
    }

    #[test]
    fn beyond_reference_named() {
        let e = hypervolume_2d(&[[0.0, 0.0], [3.0, 0.5]], [2.0, 2.0]).unwrap_err();
        assert_eq!(e, Error::BeyondReference { index: 1 });
    }

    #[test]
    fn dominated_points_ignored() {
        let a = hypervolume_2d(&[[0.0, 1.0], [1.0, 0.0]], [2.0, 2.0]).unwrap();
        let b = hypervolume_2d(&[[0.0, 1.0], [1.5, 1.5], [1.0, 0.0], [1.0, 0.0]], [2.0, 2.0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_front_is_zero() {
        assert_eq!(hypervolume_2d(&[], [1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn default_reference_scales_max() {
        let pts = [[1.0, 4.0], [2.0, 3.0]];
        let r = default_reference(pts.iter()).unwrap();
        assert!((r[0] - 2.2).abs() < 1e-12 && (r[1] - 4.4).abs() < 1e-12);
        assert!(default_reference(core::iter::empty()).is_none());
    }

    #[test]
    fn merge_keeps_nondominated_feasible() {
        let p = |agent, o: [f64; 2], feasible| FrontPoint {
            agent,
            id: 0,
            objectives: o,
            feasible,
            penalty: 0.0,
            design: vec![],
        };
        let a = vec![p(0, [1.0, 3.0], true), p(0, [2.0, 2.5], true)];
        let b = vec![p(1, [1.5, 2.0], true), p(1, [0.0, 0.0], false), p(1, [1.0, 3.0], true)];
        let m = merge_fronts([a.as_slice(), b.as_slice()]);
        let objs: Vec<[f64; 2]> = m.iter().map(|p| p.objectives).collect();
        assert_eq!(objs, vec![[1.0, 3.0], [1.5, 2.0]]);
        assert_eq!(m[0].agent, 0);
    }
}
