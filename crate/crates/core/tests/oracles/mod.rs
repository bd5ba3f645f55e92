//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use hpmr_core::pareto::ObjectivePoint;
use hpmr_core::DistanceMetric;

/// Constrained dominance written out case by case.
pub fn dominates(a: &ObjectivePoint, b: &ObjectivePoint) -> bool {
    match (a.feasible, b.feasible) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.penalty < b.penalty,
        (true, true) => {
            let mut strict = false;
            for (x, y) in a.objectives.iter().zip(&b.objectives) {
                if x > y {
                    return false;
                }
                if x < y {
                    strict = true;
                }
            }
            strict
        }
    }
}

/// Peels non-dominated layers by checking every remaining pair, O(n^3).
pub fn fronts(points: &[ObjectivePoint]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let layer: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| j != i && dominates(&points[j], &points[i])))
            .collect();
        remaining.retain(|i| !layer.contains(i));
        out.push(layer);
    }
    out
}

/// Crowding distance from neighbour search by counting: the position of a
/// member in the per-objective order is the number of members that sort
/// before it (value, then input index).
pub fn crowding(front: &[Vec<f64>]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].len();
    let mut d = vec![0.0; n];
    for k in 0..m {
        let before = |a: usize, b: usize| front[a][k] < front[b][k] || (front[a][k] == front[b][k] && a < b);
        let pos: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| before(j, i)).count()).collect();
        let at = |p: usize| (0..n).find(|&i| pos[i] == p).unwrap();
        let lo = front[at(0)][k];
        let hi = front[at(n - 1)][k];
        for i in 0..n {
            if pos[i] == 0 || pos[i] == n - 1 {
                d[i] = f64::INFINITY;
            } else if hi > lo {
                d[i] += (front[at(pos[i] + 1)][k] - front[at(pos[i] - 1)][k]) / (hi - lo);
            }
        }
    }
    d
}

pub fn normalize(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if points.is_empty() {
        return Vec::new();
    }
    let m = points[0].len();
    let lo: Vec<f64> = (0..m).map(|k| points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..m).map(|k| points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
    points
        .iter()
        .map(|p| (0..m).map(|k| if hi[k] > lo[k] { (p[k] - lo[k]) / (hi[k] - lo[k]) } else { 0.0 }).collect())
        .collect()
}

pub fn perpendicular(p: &[f64], w: &[f64]) -> f64 {
    let ww: f64 = w.iter().map(|w| w * w).sum();
    let fw: f64 = p.iter().zip(w).map(|(f, w)| f * w).sum();
    let t = if ww > 0.0 { fw / ww } else { 0.0 };
    p.iter().zip(w).map(|(f, w)| (f - t * w) * (f - t * w)).sum::<f64>().sqrt()
}

/// `(direction, distance)`: first direction with the smallest distance.
pub fn associate(p: &[f64], dirs: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, w) in dirs.iter().enumerate() {
        let d = perpendicular(p, w);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Niche-preserving selection that recounts niche occupancy from the
/// selected list before every pick and scans all remaining candidates for
/// the smallest (count, distance, direction, seq).
pub fn niche_order(normalized: &[Vec<f64>], fronts: &[Vec<usize>], seq: &[u64], dirs: &[Vec<f64>]) -> Vec<usize> {
    let assoc: Vec<(usize, f64)> = normalized.iter().map(|p| associate(p, dirs)).collect();
    let mut selected: Vec<usize> = Vec::new();
    for front in fronts {
        let mut left = front.clone();
        while !left.is_empty() {
            let count = |dir: usize| selected.iter().filter(|&&s| assoc[s].0 == dir).count();
            let key = |i: usize| (count(assoc[i].0), assoc[i].1, assoc[i].0, seq[i]);
            let mut best = left[0];
            for &c in &left[1..] {
                if key(c) < key(best) {
                    best = c;
                }
            }
            left.retain(|&i| i != best);
            selected.push(best);
        }
    }
    selected
}

/// Full archive ordering: feasible fronts by the metric, then infeasible
/// layers (ascending penalty) by sequence.
pub fn rank_order(points: &[ObjectivePoint], seq: &[u64], metric: DistanceMetric, dirs: &[Vec<f64>]) -> Vec<usize> {
    let fr = fronts(points);
    let mut order = Vec::new();
    let feasible_fronts: Vec<&Vec<usize>> = fr.iter().filter(|f| points[f[0]].feasible).collect();
    match metric {
        DistanceMetric::Crowding => {
            for f in &feasible_fronts {
                let mut f = f.to_vec();
                f.sort_by_key(|&i| seq[i]);
                let objs: Vec<Vec<f64>> = f.iter().map(|&i| points[i].objectives.clone()).collect();
                let d = crowding(&objs);
                let mut local: Vec<usize> = (0..f.len()).collect();
                local.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap().then(seq[f[a]].cmp(&seq[f[b]])));
                order.extend(local.into_iter().map(|k| f[k]));
            }
        }
        DistanceMetric::Niching => {
            let feasible: Vec<usize> = feasible_fronts.iter().flat_map(|f| f.iter().copied()).collect();
            let objs: Vec<Vec<f64>> = feasible.iter().map(|&i| points[i].objectives.clone()).collect();
            let norm = normalize(&objs);
            let local_fronts: Vec<Vec<usize>> = feasible_fronts
                .iter()
                .map(|f| f.iter().map(|i| feasible.iter().position(|j| j == i).unwrap()).collect())
                .collect();
            let local_seq: Vec<u64> = feasible.iter().map(|&i| seq[i]).collect();
            order.extend(niche_order(&norm, &local_fronts, &local_seq, dirs).into_iter().map(|k| feasible[k]));
        }
    }
    for f in fr.iter().filter(|f| !points[f[0]].feasible) {
        let mut m = f.clone();
        m.sort_by_key(|&i| seq[i]);
        order.extend(m);
    }
    order
}

/// Archive that re-ranks everything from scratch on each insertion.
pub struct Buffer {
    pub capacity: usize,
    pub metric: DistanceMetric,
    pub dirs: Vec<Vec<f64>>,
    pub entries: Vec<(ObjectivePoint, u64)>,
    next: u64,
}

impl Buffer {
    pub fn new(capacity: usize, metric: DistanceMetric, dirs: Vec<Vec<f64>>) -> Self {
        Buffer {
            capacity,
            metric,
            dirs,
            entries: Vec::new(),
            next: 0,
        }
    }

    /// One-based rank of the newcomer.
    pub fn insert(&mut self, p: ObjectivePoint) -> usize {
        self.entries.push((p, self.next));
        self.next += 1;
        let pts: Vec<ObjectivePoint> = self.entries.iter().map(|e| e.0.clone()).collect();
        let seq: Vec<u64> = self.entries.iter().map(|e| e.1).collect();
        let order = rank_order(&pts, &seq, self.metric, &self.dirs);
        let newcomer = self.entries.len() - 1;
        let rank = order.iter().position(|&i| i == newcomer).unwrap() + 1;
        let kept: Vec<(ObjectivePoint, u64)> = order
            .iter()
            .take(self.capacity)
            .map(|&i| self.entries[i].clone())
            .collect();
        self.entries = kept;
        rank
    }
}

/// Monte Carlo estimate of the dominated area and its standard error.
pub fn hypervolume_mc<R: rand::Rng>(front: &[[f64; 2]], reference: [f64; 2], lo: [f64; 2], samples: usize, rng: &mut R) -> (f64, f64) {
    let area = (reference[0] - lo[0]) * (reference[1] - lo[1]);
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = lo[0] + rng.gen::<f64>() * (reference[0] - lo[0]);
        let y = lo[1] + rng.gen::<f64>() * (reference[1] - lo[1]);
        if front.iter().any(|p| p[0] <= x && p[1] <= y) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (area * p, area * (p * (1.0 - p) / samples as f64).sqrt())
}
