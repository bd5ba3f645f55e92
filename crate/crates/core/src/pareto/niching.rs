use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Simplex-lattice reference directions: every vector of `objectives`
/// non-negative multiples of `1/divisions` summing to one.
pub fn reference_directions(objectives: usize, divisions: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    if objectives == 0 || divisions == 0 {
        return out;
    }
    let mut current = vec![0usize; objectives];
    fill(&mut out, &mut current, 0, divisions, divisions);
    out
}

fn fill(out: &mut Vec<Vec<f64>>, current: &mut [usize], dim: usize, left: usize, divisions: usize) {
    if dim == current.len() - 1 {
        current[dim] = left;
        out.push(current.iter().map(|&c| c as f64 / divisions as f64).collect());
        return;
    }
    for k in 0..=left {
        current[dim] = k;
        fill(out, current, dim + 1, left - k, divisions);
    }
}

/// Largest lattice resolution whose direction count does not exceed
/// `capacity` (one niche per archive slot).
pub fn default_divisions(objectives: usize, capacity: usize) -> usize {
    let mut d = 1;
    while binomial(d + 1 + objectives - 1, objectives - 1) <= capacity {
        d += 1;
    }
    d
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Association of one point with its closest reference direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Niche {
    pub direction: usize,
    pub distance: f64,
}

/// Min-max normalization per objective; zero-span objectives map to 0.
pub(crate) fn normalize(points: &[&[f64]]) -> Vec<Vec<f64>> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let m = first.len();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for p in points {
        for k in 0..m {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    points
        .iter()
        .map(|p| {
            (0..m)
                .map(|k| {
                    let span = hi[k] - lo[k];
                    if span > 0.0 {
                        (p[k] - lo[k]) / span
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

pub(crate) fn associate(point: &[f64], directions: &[Vec<f64>]) -> Niche {
    let mut best = Niche {
        direction: 0,
        distance: f64::INFINITY,
    };
    for (j, w) in directions.iter().enumerate() {
        let d = perpendicular_distance(point, w);
        if d < best.distance {
            best = Niche {
                direction: j,
                distance: d,
            };
        }
    }
    best
}

fn perpendicular_distance(point: &[f64], direction: &[f64]) -> f64 {
    let ww: f64 = direction.iter().map(|w| w * w).sum();
    let fw: f64 = point.iter().zip(direction).map(|(f, w)| f * w).sum();
    let t = if ww > 0.0 { fw / ww } else { 0.0 };
    let sq: f64 = point
        .iter()
        .zip(direction)
        .map(|(f, w)| {
            let r = f - t * w;
            r * r
        })
        .sum();
    libm::sqrt(sq)
}

/// Niche-preserving order of already-normalized points, front by front.
/// Niche counts accumulate across fronts. At each pick the least-crowded
/// niche with a remaining candidate wins (ties: closer best candidate, then
/// lower direction index) and contributes its closest candidate (ties:
/// smaller `seq`).
pub(crate) fn niche_order(
    normalized: &[Vec<f64>],
    fronts: &[Vec<usize>],
    seq: &[u64],
    directions: &[Vec<f64>],
) -> Result<(Vec<usize>, Vec<Niche>)> {
    if directions.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let niches: Vec<Niche> = normalized.iter().map(|p| associate(p, directions)).collect();
    let mut counts = vec![0usize; directions.len()];
    let mut order = Vec::with_capacity(normalized.len());
    for front in fronts {
        // Candidates per niche, closest first.
        let mut pools: Vec<Vec<usize>> = vec![Vec::new(); directions.len()];
        for &i in front {
            pools[niches[i].direction].push(i);
        }
        for pool in &mut pools {
            pool.sort_by(|&a, &b| {
                niches[b]
                    .distance
                    .partial_cmp(&niches[a].distance)
                    .unwrap_or(core::cmp::Ordering::Equal)
                    .then(seq[b].cmp(&seq[a]))
            });
        }
        for _ in 0..front.len() {
            let mut pick: Option<usize> = None;
            for (j, pool) in pools.iter().enumerate() {
                let Some(&cand) = pool.last() else { continue };
                pick = match pick {
                    None => Some(j),
                    Some(p) => {
                        let best = *pools[p].last().unwrap();
                        let better = counts[j] < counts[p]
                            || (counts[j] == counts[p]
                                && niches[cand].distance < niches[best].distance);
                        if better {
                            Some(j)
                        } else {
                            Some(p)
                        }
                    }
                };
            }
            let j = pick.expect("front members remain");
            let i = pools[j].pop().unwrap();
            counts[j] += 1;
            order.push(i);
        }
    }
    Ok((order, niches))
}

/// Ranks one front of points by niching. Points are normalized with their
/// own per-objective min/max; ties fall back to input order. Returns point
/// indices, best first.
pub fn niching_rank(points: &[&[f64]], directions: &[Vec<f64>]) -> Result<Vec<usize>> {
    if directions.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let normalized = normalize(points);
    let front: Vec<usize> = (0..points.len()).collect();
    let seq: Vec<u64> = (0..points.len() as u64).collect();
    let (order, _) = niche_order(&normalized, &[front], &seq, directions)?;
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corners() {
        assert_eq!(
            reference_directions(2, 1),
            vec![vec![0.0, 1.0], vec![1.0, 0.0]]
        );
    }

    #[test]
    fn counts() {
        assert_eq!(reference_directions(2, 4).len(), 5);
        assert_eq!(reference_directions(3, 3).len(), 10);
        assert_eq!(reference_directions(2, 63).len(), 64);
        for d in reference_directions(3, 5) {
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn default_resolution() {
        assert_eq!(default_divisions(2, 64), 63);
        assert_eq!(default_divisions(3, 64), 9); // C(11, 2) = 55, C(12, 2) = 66
    }

    #[test]
    fn one_point_per_niche() {
        let dirs = reference_directions(2, 1);
        let a = [0.0, 1.0];
        let b = [1.0, 0.2];
        // after normalization b -> (1, 0) sits on its direction, a -> (0, 1) as well
        let order = niching_rank(&[&a, &b], &dirs).unwrap();
        assert_eq!(order, vec![0, 1]);
    }

    #[test]
    fn single_niche_orders_by_distance() {
        let dirs = reference_directions(2, 2);
        let normalized = vec![
            vec![0.1, 0.9],
            vec![0.0, 1.0],
            vec![0.2, 0.95],
            vec![0.05, 0.6],
        ];
        let niches: Vec<Niche> = normalized.iter().map(|p| associate(p, &dirs)).collect();
        assert!(niches.iter().all(|n| n.direction == 0));
        let (order, _) = niche_order(&normalized, &[vec![0, 1, 2, 3]], &[0, 1, 2, 3], &dirs).unwrap();
        assert_eq!(order, vec![1, 3, 0, 2]);
    }

    #[test]
    fn empty_directions() {
        let a = [0.0, 1.0];
        assert_eq!(niching_rank(&[&a], &[]), Err(Error::EmptyReferenceSet));
    }
}
