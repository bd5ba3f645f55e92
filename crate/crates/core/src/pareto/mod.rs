//! Constrained dominance, non-dominated sorting, crowding and niching
//! distances, and the bounded rank-reward archive.

mod buffer;
mod dominance;
mod niching;
mod sort;

pub use buffer::{BufferEntry, Insertion, ParetoBuffer};
pub use dominance::{dominates, dominates_unchecked};
pub use niching::{default_divisions, niching_rank, reference_directions, Niche};
pub use sort::{crowding_distance, nondominated_sort, rank_order, Ranking};

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// An evaluated solution in objective space. All objectives are minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePoint {
    pub objectives: Vec<f64>,
    pub feasible: bool,
    /// Aggregate constraint penalty; zero exactly when feasible.
    pub penalty: f64,
    /// Caller-assigned identifier of the originating design.
    pub id: u64,
    /// Design variables that produced the objectives.
    pub design: Vec<f64>,
}

impl ObjectivePoint {
    pub fn feasible(objectives: Vec<f64>, id: u64) -> Self {
        ObjectivePoint {
            objectives,
            feasible: true,
            penalty: 0.0,
            id,
            design: Vec::new(),
        }
    }

    pub fn infeasible(objectives: Vec<f64>, penalty: f64, id: u64) -> Self {
        ObjectivePoint {
            objectives,
            feasible: false,
            penalty,
            id,
            design: Vec::new(),
        }
    }

    pub fn with_design(mut self, design: Vec<f64>) -> Self {
        self.design = design;
        self
    }
}

/// Within-front diversity criterion used to order the archive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    Crowding,
    #[default]
    Niching,
}
