use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::dominance::dominates_unchecked;
use super::niching::{niche_order, normalize};
use super::{DistanceMetric, ObjectivePoint};
use crate::error::Result;

/// Splits points into successive non-dominated fronts under constrained
/// dominance. Indices within a front are ascending.
pub fn nondominated_sort(points: &[ObjectivePoint]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates_unchecked(&points[i], &points[j]) {
                dominated_by[i].push(j);
                counts[j] += 1;
            } else if dominates_unchecked(&points[j], &points[i]) {
                dominated_by[j].push(i);
                counts[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| counts[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                counts[j] -= 1;
                if counts[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of a mutually non-dominated front.
/// Boundary points per objective get `+inf`; fronts of two or fewer points
/// are all boundary.
pub fn crowding_distance(front: &[&[f64]]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].len();
    let mut distance = vec![0.0; n];
    for k in 0..m {
        // equal values keep input order
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| front[a][k].partial_cmp(&front[b][k]).unwrap_or(Ordering::Equal));
        let lo = front[idx[0]][k];
        let hi = front[idx[n - 1]][k];
        distance[idx[0]] = f64::INFINITY;
        distance[idx[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let gap = front[idx[w + 1]][k] - front[idx[w - 1]][k];
            distance[idx[w]] += gap / span;
        }
    }
    distance
}

/// Full archive ordering of a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// Point indices, best first.
    pub order: Vec<usize>,
    /// Zero-based front index per point.
    pub front: Vec<usize>,
    /// Per point: crowding distance (larger is better) or perpendicular
    /// distance to the associated reference direction (smaller is better).
    /// Zero for infeasible points.
    pub distance: Vec<f64>,
}

impl Ranking {
    /// One-based rank of every point.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (pos, &i) in self.order.iter().enumerate() {
            ranks[i] = pos + 1;
        }
        ranks
    }
}

/// Orders points by front, then by the distance metric within each feasible
/// front; infeasible fronts (equal penalty) keep sequence order. `seq` gives
/// insertion order and breaks every remaining tie (smaller first).
pub fn rank_order(
    points: &[ObjectivePoint],
    seq: &[u64],
    metric: DistanceMetric,
    directions: &[Vec<f64>],
) -> Result<Ranking> {
    let n = points.len();
    let fronts = nondominated_sort(points);
    let mut front_of = vec![0; n];
    for (f, members) in fronts.iter().enumerate() {
        for &i in members {
            front_of[i] = f;
        }
    }
    let mut distance = vec![0.0; n];
    let mut order = Vec::with_capacity(n);

    let feasible_fronts: Vec<&Vec<usize>> =
        fronts.iter().filter(|f| points[f[0]].feasible).collect();

    match metric {
        DistanceMetric::Crowding => {
            for members in &feasible_fronts {
                // crowding ties on equal values follow input order, so feed
                // members by sequence to make the result order-independent
                let mut members: Vec<usize> = members.to_vec();
                members.sort_by_key(|&i| seq[i]);
                let objs: Vec<&[f64]> =
                    members.iter().map(|&i| points[i].objectives.as_slice()).collect();
                let cd = crowding_distance(&objs);
                let mut local: Vec<usize> = (0..members.len()).collect();
                local.sort_by(|&a, &b| {
                    cd[b]
                        .partial_cmp(&cd[a])
                        .unwrap_or(Ordering::Equal)
                        .then(seq[members[a]].cmp(&seq[members[b]]))
                });
                for (k, &i) in members.iter().enumerate() {
                    distance[i] = cd[k];
                }
                order.extend(local.into_iter().map(|k| members[k]));
            }
        }
        DistanceMetric::Niching => {
            let feasible: Vec<usize> = feasible_fronts.iter().flat_map(|f| f.iter().copied()).collect();
            let objs: Vec<&[f64]> = feasible.iter().map(|&i| points[i].objectives.as_slice()).collect();
            let normalized = normalize(&objs);
            let mut position = vec![usize::MAX; n];
            for (k, &i) in feasible.iter().enumerate() {
                position[i] = k;
            }
            let local_fronts: Vec<Vec<usize>> = feasible_fronts
                .iter()
                .map(|f| f.iter().map(|&i| position[i]).collect())
                .collect();
            let local_seq: Vec<u64> = feasible.iter().map(|&i| seq[i]).collect();
            let (local_order, niches) = niche_order(&normalized, &local_fronts, &local_seq, directions)?;
            for (k, &i) in feasible.iter().enumerate() {
                distance[i] = niches[k].distance;
            }
            order.extend(local_order.into_iter().map(|k| feasible[k]));
        }
    }

    for members in fronts.iter().filter(|f| !points[f[0]].feasible) {
        let mut m = members.clone();
        m.sort_by_key(|&i| seq[i]);
        order.extend(m);
    }

    Ok(Ranking {
        order,
        front: front_of,
        distance,
    })
}
