use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::policy::{sample_action, Policy};
use super::ppo::{ppo_update, Adam, Transition, UpdateStats};
use super::PearlConfig;
use crate::env::{Environment, Outcome};
use crate::error::Result;
use crate::metrics::{merge_fronts, FrontPoint, StepRecord};
use crate::pareto::{DistanceMetric, ObjectivePoint, ParetoBuffer};

/// Penalty recorded for a design whose evaluation failed twice.
pub const FAILURE_PENALTY: f64 = 1e12;

/// Inserts the evaluated point into the archive and returns its reward:
/// `-penalty` when infeasible, `-rank` when feasible.
pub fn step_reward(outcome: &Outcome, buffer: &mut ParetoBuffer, id: u64) -> f64 {
    let point = if outcome.feasible {
        ObjectivePoint::feasible(outcome.objectives.clone(), id)
    } else {
        ObjectivePoint::infeasible(outcome.objectives.clone(), outcome.penalty, id)
    }
    .with_design(outcome.design.clone());
    let ins = buffer.insert(point);
    if outcome.feasible {
        ins.reward()
    } else {
        -outcome.penalty
    }
}

/// Policy update bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateRecord {
    /// Steps completed when the update ran.
    pub step: usize,
    pub entropy: f64,
    pub stats: UpdateStats,
}

/// One agent: policy, optimizer state, private archive and rng.
#[derive(Debug, Clone)]
pub struct PearlAgent<E> {
    env: E,
    config: PearlConfig,
    agent: usize,
    seed: u64,
    policy: Policy,
    adam: Adam,
    buffer: ParetoBuffer,
    rng: ChaCha8Rng,
    rollout: Vec<Transition>,
    history: Vec<StepRecord>,
    updates: Vec<UpdateRecord>,
}

impl<E: Environment> PearlAgent<E> {
    pub fn new(env: E, config: &PearlConfig, agent: usize, seed: u64) -> Result<Self> {
        config.check()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let policy = Policy::new(env.dim(), config.hidden, &mut rng);
        let adam = Adam::new(policy.n_params(), config.learning_rate);
        let buffer = ParetoBuffer::new(config.capacity, config.metric, env.objectives());
        Ok(PearlAgent {
            env,
            config: config.clone(),
            agent,
            seed,
            policy,
            adam,
            buffer,
            rng,
            rollout: Vec::with_capacity(config.n_steps),
            history: Vec::new(),
            updates: Vec::new(),
        })
    }

    fn evaluate(&self, u: &[f64]) -> Outcome {
        match self.env.evaluate(u).or_else(|_| self.env.evaluate(u)) {
            Ok(o) => o,
            Err(e) => {
                log::warn!("agent {}: evaluation failed twice ({e}); recorded as infeasible", self.agent);
                Outcome {
                    objectives: vec![f64::INFINITY; self.env.objectives()],
                    feasible: false,
                    penalty: FAILURE_PENALTY,
                    design: u.to_vec(),
                    qoi: None,
                }
            }
        }
    }

    /// Samples, evaluates and archives one design; updates the policy after
    /// every `n_steps` transitions.
    pub fn step(&mut self) -> &StepRecord {
        let placeholder = ParetoBuffer::with_directions(1, DistanceMetric::Crowding, Vec::new());
        let mut buffer = core::mem::replace(&mut self.buffer, placeholder);
        let id = self.history.len() as u64;
        self.step_shared(&mut buffer, id);
        self.buffer = buffer;
        self.history.last().expect("step recorded")
    }

    /// Like [`step`](Self::step) but archives into `buffer` under point id
    /// `id` instead of the agent's own archive.
    pub fn step_shared(&mut self, buffer: &mut ParetoBuffer, id: u64) -> &StepRecord {
        let action = sample_action(&self.policy, &mut self.rng);
        let outcome = self.evaluate(&action.u);
        let step = self.history.len();
        let reward = step_reward(&outcome, buffer, id);
        let objectives = [outcome.objectives[0], outcome.objectives.get(1).copied().unwrap_or(0.0)];
        self.history.push(StepRecord {
            agent: self.agent,
            step,
            reward,
            feasible: outcome.feasible,
            penalty: outcome.penalty,
            objectives,
        });
        self.rollout.push(Transition {
            z: action.z,
            log_prob: action.log_prob,
            reward,
            value: action.value,
        });
        if self.rollout.len() == self.config.n_steps {
            let stats = ppo_update(
                &mut self.policy,
                &mut self.adam,
                &self.rollout,
                &self.config.loss_coefficients(),
                self.config.max_grad_norm,
                self.config.epochs,
            );
            self.rollout.clear();
            self.updates.push(UpdateRecord {
                step: step + 1,
                entropy: self.policy.entropy(),
                stats,
            });
        }
        &self.history[step]
    }

    pub fn steps_done(&self) -> usize {
        self.history.len()
    }

    pub fn agent(&self) -> usize {
        self.agent
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    pub fn buffer(&self) -> &ParetoBuffer {
        &self.buffer
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    pub fn updates(&self) -> &[UpdateRecord] {
        &self.updates
    }

    pub fn into_run(self) -> AgentRun {
        let front = self
            .buffer
            .front()
            .map(|p| FrontPoint::from_objective_point(self.agent, p))
            .collect();
        let archive = self
            .buffer
            .entries()
            .iter()
            .map(|e| FrontPoint::from_objective_point(self.agent, &e.point))
            .collect();
        AgentRun {
            agent: self.agent,
            seed: self.seed,
            front,
            archive,
            history: self.history,
            updates: self.updates,
            policy: self.policy,
        }
    }
}

/// Everything one finished agent reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentRun {
    pub agent: usize,
    pub seed: u64,
    /// Feasible first-front archive members.
    pub front: Vec<FrontPoint>,
    /// Whole archive in rank order.
    pub archive: Vec<FrontPoint>,
    pub history: Vec<StepRecord>,
    pub updates: Vec<UpdateRecord>,
    pub policy: Policy,
}

/// Runs one agent for its share of the budget.
pub fn run_agent<E: Environment>(env: E, config: &PearlConfig, agent: usize) -> Result<AgentRun> {
    let mut a = PearlAgent::new(env, config, agent, config.agent_seed(agent))?;
    for _ in 0..config.agent_steps(agent) {
        a.step();
    }
    Ok(a.into_run())
}

/// Per-agent results and their non-dominated union.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiRun {
    pub runs: Vec<AgentRun>,
    /// `(agent, message)` for agents that did not finish.
    pub failures: Vec<(usize, String)>,
    pub merged: Vec<FrontPoint>,
}

impl MultiRun {
    pub fn from_results(results: Vec<(usize, Result<AgentRun>)>) -> Self {
        let mut runs = Vec::new();
        let mut failures = Vec::new();
        for (agent, r) in results {
            match r {
                Ok(run) => runs.push(run),
                Err(e) => failures.push((agent, e.to_string())),
            }
        }
        let merged = merge_fronts(runs.iter().map(|r| r.front.as_slice()));
        MultiRun { runs, failures, merged }
    }
}

/// Runs every agent in turn on clones of `env`. The std companion crate
/// runs the same private-buffer agents on worker threads.
pub fn run_multi<E: Environment + Clone>(env: &E, config: &PearlConfig) -> Result<MultiRun> {
    config.check()?;
    if config.shared_buffer {
        return run_shared(env, config);
    }
    let results = (0..config.agents)
        .map(|i| (i, run_agent(env.clone(), config, i)))
        .collect();
    Ok(MultiRun::from_results(results))
}

fn run_shared<E: Environment + Clone>(env: &E, config: &PearlConfig) -> Result<MultiRun> {
    let mut agents = (0..config.agents)
        .map(|i| PearlAgent::new(env.clone(), config, i, config.agent_seed(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut buffer = ParetoBuffer::new(config.capacity, config.metric, env.objectives());
    let mut owner = Vec::with_capacity(config.total_steps);
    for k in 0..config.agent_steps(0) {
        for a in agents.iter_mut().filter(|a| k < config.agent_steps(a.agent)) {
            a.step_shared(&mut buffer, owner.len() as u64);
            owner.push(a.agent);
        }
    }
    let tag = |p: &ObjectivePoint| FrontPoint::from_objective_point(owner[p.id as usize], p);
    let front: Vec<FrontPoint> = buffer.front().map(tag).collect();
    let archive: Vec<FrontPoint> = buffer.entries().iter().map(|e| tag(&e.point)).collect();
    let runs = agents
        .into_iter()
        .map(|a| {
            let mut run = a.into_run();
            run.front = front.iter().filter(|p| p.agent == run.agent).cloned().collect();
            run.archive = archive.iter().filter(|p| p.agent == run.agent).cloned().collect();
            run
        })
        .collect();
    Ok(MultiRun {
        runs,
        failures: Vec::new(),
        merged: merge_fronts([front.as_slice()]),
    })
}
