use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::niching::{default_divisions, reference_directions};
use super::sort::rank_order;
use super::{DistanceMetric, ObjectivePoint};

/// An archived point with the ranking data of the last insertion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BufferEntry {
    pub point: ObjectivePoint,
    /// Insertion sequence number; older entries win ties.
    pub seq: u64,
    /// Zero-based front index.
    pub front: usize,
    pub distance: f64,
}

/// Result of offering a point to the archive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    /// One-based rank of the new point among the old entries plus itself.
    pub rank: usize,
    pub retained: bool,
}

impl Insertion {
    pub fn reward(&self) -> f64 {
        -(self.rank as f64)
    }
}

/// Bounded archive kept sorted by (front, distance). Each insertion ranks
/// the newcomer against the current entries, returns that rank as the
/// reward signal, and keeps the best `capacity` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoBuffer {
    entries: Vec<BufferEntry>,
    capacity: usize,
    metric: DistanceMetric,
    directions: Vec<Vec<f64>>,
    next_seq: u64,
}

impl ParetoBuffer {
    /// Archive for `objectives` objectives. Niching uses one reference
    /// direction per slot.
    pub fn new(capacity: usize, metric: DistanceMetric, objectives: usize) -> Self {
        let directions = match metric {
            DistanceMetric::Crowding => Vec::new(),
            DistanceMetric::Niching => {
                reference_directions(objectives, default_divisions(objectives, capacity))
            }
        };
        Self::with_directions(capacity, metric, directions)
    }

    pub fn with_directions(capacity: usize, metric: DistanceMetric, directions: Vec<Vec<f64>>) -> Self {
        assert!(capacity >= 1, "archive capacity must be positive");
        assert!(
            metric == DistanceMetric::Crowding || !directions.is_empty(),
            "niching needs reference directions"
        );
        ParetoBuffer {
            entries: Vec::with_capacity(capacity + 1),
            capacity,
            metric,
            directions,
            next_seq: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries, best first.
    pub fn entries(&self) -> &[BufferEntry] {
        &self.entries
    }

    /// Feasible members of the first front.
    pub fn front(&self) -> impl Iterator<Item = &ObjectivePoint> {
        self.entries
            .iter()
            .take_while(|e| e.front == 0)
            .filter(|e| e.point.feasible)
            .map(|e| &e.point)
    }

    pub fn insert(&mut self, point: ObjectivePoint) -> Insertion {
        let seq = self.next_seq;
        self.next_seq += 1;

        let mut points: Vec<ObjectivePoint> = self.entries.iter().map(|e| e.point.clone()).collect();
        let mut seqs: Vec<u64> = self.entries.iter().map(|e| e.seq).collect();
        points.push(point);
        seqs.push(seq);
        let newcomer = points.len() - 1;

        let ranking = rank_order(&points, &seqs, self.metric, &self.directions)
            .expect("buffer reference directions are non-empty");
        let rank = ranking
            .order
            .iter()
            .position(|&i| i == newcomer)
            .expect("newcomer is ranked")
            + 1;

        let mut slots: Vec<Option<ObjectivePoint>> = points.into_iter().map(Some).collect();
        self.entries = ranking
            .order
            .iter()
            .take(self.capacity)
            .map(|&i| BufferEntry {
                point: slots[i].take().unwrap(),
                seq: seqs[i],
                front: ranking.front[i],
                distance: ranking.distance[i],
            })
            .collect();
        Insertion {
            rank,
            retained: rank <= self.capacity,
        }
    }
}
