//! Rank-reward reinforcement-learning optimizer: each agent samples whole
//! designs from a squashed-normal policy, rewards feasible samples with
//! their negative rank in a bounded Pareto archive and infeasible ones with
//! their negative penalty, and improves the policy with clipped-surrogate
//! updates.

mod agent;
pub mod policy;
pub mod ppo;

pub use agent::{run_agent, run_multi, step_reward, AgentRun, MultiRun, PearlAgent, UpdateRecord, FAILURE_PENALTY};
pub use policy::{sample_action, Action, Policy};
pub use ppo::{ppo_update, Adam, Batch, LossCoefficients, LossParts, Transition, UpdateStats};

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::DistanceMetric;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PearlConfig {
    /// Transitions per rollout (one update per rollout).
    pub n_steps: usize,
    pub entropy_coeff: f64,
    pub value_coeff: f64,
    pub learning_rate: f64,
    pub max_grad_norm: f64,
    pub clip_range: f64,
    /// Archive capacity per agent.
    pub capacity: usize,
    pub agents: usize,
    /// Evaluations summed over all agents.
    pub total_steps: usize,
    pub metric: DistanceMetric,
    /// Gradient epochs per rollout.
    pub epochs: usize,
    /// Hidden width of both networks.
    pub hidden: usize,
    /// Base seed; agent `i` uses `seed + i` unless `seeds` is given.
    pub seed: u64,
    pub seeds: Option<Vec<u64>>,
    /// All agents archive into one buffer, stepping round-robin on a
    /// single thread.
    pub shared_buffer: bool,
}

impl Default for PearlConfig {
    fn default() -> Self {
        PearlConfig {
            n_steps: 8,
            entropy_coeff: 0.0001,
            value_coeff: 0.5,
            learning_rate: 0.00025,
            max_grad_norm: 0.5,
            clip_range: 0.2,
            capacity: 64,
            agents: 8,
            total_steps: 100_000,
            metric: DistanceMetric::Niching,
            epochs: 10,
            hidden: 64,
            seed: 0,
            seeds: None,
            shared_buffer: false,
        }
    }
}

impl PearlConfig {
    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        for (name, v) in [
            ("entropy_coeff", self.entropy_coeff),
            ("value_coeff", self.value_coeff),
            ("learning_rate", self.learning_rate),
            ("max_grad_norm", self.max_grad_norm),
            ("clip_range", self.clip_range),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(alloc::format!("{name} must be a non-negative number")));
            }
        }
        if self.n_steps == 0 || self.capacity == 0 || self.agents == 0 || self.hidden == 0 {
            return bad("n_steps, capacity, agents and hidden must be positive");
        }
        if self.total_steps % self.n_steps != 0 {
            return bad("total_steps must be a multiple of n_steps");
        }
        if self.total_steps < self.agents {
            return bad("total_steps must give every agent at least one step");
        }
        if let Some(s) = &self.seeds {
            if s.len() != self.agents {
                return bad("seeds must list one seed per agent");
            }
        }
        Ok(())
    }

    pub fn agent_seed(&self, agent: usize) -> u64 {
        match &self.seeds {
            Some(s) => s[agent],
            None => self.seed.wrapping_add(agent as u64),
        }
    }

    /// Evaluation budget of one agent; any remainder goes to the first agents.
    pub fn agent_steps(&self, agent: usize) -> usize {
        self.total_steps / self.agents + usize::from(agent < self.total_steps % self.agents)
    }

    pub fn loss_coefficients(&self) -> LossCoefficients {
        LossCoefficients {
            clip_range: self.clip_range,
            value_coeff: self.value_coeff,
            entropy_coeff: self.entropy_coeff,
        }
    }
}
