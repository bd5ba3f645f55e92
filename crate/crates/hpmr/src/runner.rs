//! Optimization runs: one worker thread per agent, results gathered after
//! join, files written single-threaded afterwards.

use std::path::{Path, PathBuf};
use std::time::Instant;

use hpmr_core::metrics::{default_reference, merge_fronts, FrontPoint, FrontReport, StepRecord};
use hpmr_core::nsga2::{run_nsga2, GaConfig};
use hpmr_core::pareto::{crowding_distance, nondominated_sort, ObjectivePoint, ParetoBuffer};
use hpmr_core::pearl::{PearlAgent, PearlConfig, Policy, UpdateRecord};
use hpmr_core::Environment;
use serde::{Deserialize, Serialize};

use crate::config::{OptimizerKind, RunConfig, ScenarioFile};
use crate::error::{exit, Error, Result};
use crate::formats::{self, SnapshotRow};
use crate::plot::{render_scatter, Scatter};

/// Policy parameters of one agent after `step` steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub agent: usize,
    pub seed: u64,
    pub step: usize,
    pub policy: Policy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentOutput {
    pub agent: usize,
    pub seed: u64,
    pub history: Vec<StepRecord>,
    pub updates: Vec<UpdateRecord>,
    /// Final archive (population for NSGA-II) in rank order.
    pub archive: Vec<SnapshotRow>,
    /// Feasible first-front members.
    pub front: Vec<FrontPoint>,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub agent: usize,
    pub seed: u64,
    pub message: String,
}

/// Wall-clock guard and checkpointing shared by all workers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
    pub checkpoint_interval: Option<usize>,
}

impl Limits {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Complete,
    NoFeasible,
    Partial,
    Failed,
}

impl RunStatus {
    pub fn exit_code(self) -> u8 {
        match self {
            RunStatus::Complete => exit::OK,
            RunStatus::NoFeasible => exit::INFEASIBLE,
            RunStatus::Partial => exit::PARTIAL,
            RunStatus::Failed => exit::FAILED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub agents: Vec<AgentOutput>,
    pub failures: Vec<Failure>,
    /// Archive shared by all agents, when configured.
    pub shared_archive: Option<Vec<SnapshotRow>>,
    pub merged: Vec<FrontPoint>,
    /// Stopped by the wall-clock guard before the budget was spent.
    pub truncated: bool,
    pub elapsed_seconds: f64,
}

impl RunResult {
    pub fn evaluations(&self) -> usize {
        self.agents.iter().map(|a| a.history.len()).sum()
    }

    pub fn status(&self) -> RunStatus {
        if self.agents.is_empty() {
            RunStatus::Failed
        } else if !self.failures.is_empty() || self.truncated {
            RunStatus::Partial
        } else if self.merged.is_empty() {
            RunStatus::NoFeasible
        } else {
            RunStatus::Complete
        }
    }

    /// Reference point over every agent front: max + 10% of |max|.
    pub fn reference(&self) -> Option<[f64; 2]> {
        default_reference(self.agents.iter().flat_map(|a| a.front.iter()).map(|p| &p.objectives))
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "agent panicked".into())
}

fn drive_agent<E: Environment>(
    env: E,
    config: &PearlConfig,
    agent: usize,
    limits: Limits,
) -> hpmr_core::Result<(AgentOutput, bool)> {
    let seed = config.agent_seed(agent);
    let mut a = PearlAgent::new(env, config, agent, seed)?;
    let mut checkpoints = Vec::new();
    let mut truncated = false;
    for _ in 0..config.agent_steps(agent) {
        if limits.expired() {
            truncated = true;
            break;
        }
        a.step();
        if let Some(k) = limits.checkpoint_interval {
            if a.steps_done() % k == 0 {
                checkpoints.push(Checkpoint {
                    agent,
                    seed,
                    step: a.steps_done(),
                    policy: a.policy().clone(),
                });
            }
        }
    }
    let archive = formats::snapshot_rows(agent, a.buffer().entries());
    let run = a.into_run();
    Ok((
        AgentOutput {
            agent,
            seed,
            history: run.history,
            updates: run.updates,
            archive,
            front: run.front,
            checkpoints,
        },
        truncated,
    ))
}

/// Runs every agent on its own thread with a private archive. Agents that
/// fail or panic are reported in `failures`; the others still count.
pub fn run_pearl<E: Environment + Clone>(env: &E, config: &PearlConfig, limits: Limits) -> Result<RunResult> {
    config.check()?;
    let start = Instant::now();
    if config.shared_buffer {
        return run_pearl_shared(env, config, limits, start);
    }
    let joined: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..config.agents)
            .map(|i| {
                let env = env.clone();
                s.spawn(move || drive_agent(env, config, i, limits))
            })
            .collect();
        handles.into_iter().map(|h| h.join()).collect()
    });
    let mut agents = Vec::new();
    let mut failures = Vec::new();
    let mut truncated = false;
    for (i, r) in joined.into_iter().enumerate() {
        let seed = config.agent_seed(i);
        match r {
            Ok(Ok((out, t))) => {
                truncated |= t;
                agents.push(out);
            }
            Ok(Err(e)) => failures.push(Failure {
                agent: i,
                seed,
                message: e.to_string(),
            }),
            Err(p) => failures.push(Failure {
                agent: i,
                seed,
                message: panic_message(p),
            }),
        }
    }
    let merged = merge_fronts(agents.iter().map(|a| a.front.as_slice()));
    Ok(RunResult {
        agents,
        failures,
        shared_archive: None,
        merged,
        truncated,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// All agents step round-robin on this thread into one archive.
fn run_pearl_shared<E: Environment + Clone>(
    env: &E,
    config: &PearlConfig,
    limits: Limits,
    start: Instant,
) -> Result<RunResult> {
    let mut agents = (0..config.agents)
        .map(|i| PearlAgent::new(env.clone(), config, i, config.agent_seed(i)))
        .collect::<hpmr_core::Result<Vec<_>>>()?;
    let mut buffer = ParetoBuffer::new(config.capacity, config.metric, env.objectives());
    let mut owner = Vec::with_capacity(config.total_steps);
    let mut checkpoints: Vec<Vec<Checkpoint>> = vec![Vec::new(); config.agents];
    let mut truncated = false;
    'outer: for k in 0..config.agent_steps(0) {
        for a in agents.iter_mut().filter(|a| k < config.agent_steps(a.agent())) {
            if limits.expired() {
                truncated = true;
                break 'outer;
            }
            a.step_shared(&mut buffer, owner.len() as u64);
            owner.push(a.agent());
            if limits.checkpoint_interval.is_some_and(|n| a.steps_done() % n == 0) {
                checkpoints[a.agent()].push(Checkpoint {
                    agent: a.agent(),
                    seed: config.agent_seed(a.agent()),
                    step: a.steps_done(),
                    policy: a.policy().clone(),
                });
            }
        }
    }
    let tag = |p: &ObjectivePoint| FrontPoint::from_objective_point(owner[p.id as usize], p);
    let shared: Vec<SnapshotRow> = buffer
        .entries()
        .iter()
        .map(|e| SnapshotRow {
            point: tag(&e.point),
            front: e.front,
            distance: e.distance,
        })
        .collect();
    let front: Vec<FrontPoint> = buffer.front().map(tag).collect();
    let outputs = agents
        .into_iter()
        .zip(checkpoints)
        .map(|(a, checkpoints)| {
            let (agent, seed) = (a.agent(), config.agent_seed(a.agent()));
            let run = a.into_run();
            AgentOutput {
                agent,
                seed,
                history: run.history,
                updates: run.updates,
                archive: shared.iter().filter(|r| r.point.agent == agent).cloned().collect(),
                front: front.iter().filter(|p| p.agent == agent).cloned().collect(),
                checkpoints,
            }
        })
        .collect();
    Ok(RunResult {
        agents: outputs,
        failures: Vec::new(),
        shared_archive: Some(shared),
        merged: merge_fronts([front.as_slice()]),
        truncated,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Ranks a final population by front then crowding distance.
fn population_snapshot(points: Vec<ObjectivePoint>) -> Vec<SnapshotRow> {
    let mut rows = Vec::with_capacity(points.len());
    for (f, members) in nondominated_sort(&points).into_iter().enumerate() {
        let objs: Vec<&[f64]> = members.iter().map(|&i| points[i].objectives.as_slice()).collect();
        let dist = crowding_distance(&objs);
        let mut order: Vec<usize> = (0..members.len()).collect();
        order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]));
        for k in order {
            rows.push(SnapshotRow {
                point: FrontPoint::from_objective_point(0, &points[members[k]]),
                front: f,
                distance: dist[k],
            });
        }
    }
    rows
}

pub fn run_ga<E: Environment>(env: &E, config: &GaConfig) -> Result<RunResult> {
    let start = Instant::now();
    let run = run_nsga2(env, config)?;
    let archive = population_snapshot(run.population.into_iter().map(|i| i.point).collect());
    let agent = AgentOutput {
        agent: 0,
        seed: config.seed,
        history: run.history,
        updates: Vec::new(),
        archive,
        front: run.front.clone(),
        checkpoints: Vec::new(),
    };
    Ok(RunResult {
        agents: vec![agent],
        failures: Vec::new(),
        shared_archive: None,
        merged: merge_fronts([run.front.as_slice()]),
        truncated: false,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Builds the environment from the configuration and runs the chosen
/// optimizer.
pub fn execute(config: &RunConfig, scenario: &ScenarioFile) -> Result<RunResult> {
    config.check()?;
    let env = config.environment(scenario)?;
    let limits = Limits {
        deadline: config
            .max_seconds
            .map(|s| Instant::now() + std::time::Duration::from_secs_f64(s)),
        checkpoint_interval: config.checkpoint_interval,
    };
    match config.optimizer {
        OptimizerKind::Pearl => run_pearl(&env, &config.pearl, limits),
        OptimizerKind::Nsga2 => run_ga(&env, &config.nsga2),
    }
}

/// Self-describing record of a run; `optimize --manifest` replays it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub label: String,
    /// `(package, version)` pairs.
    pub versions: Vec<(String, String)>,
    pub config: RunConfig,
    /// Scenario contents as resolved at run time.
    pub scenario: ScenarioFile,
    pub seeds: Vec<u64>,
    pub evaluations: usize,
    pub status: RunStatus,
    pub truncated: bool,
    pub failed_agents: Vec<usize>,
    pub elapsed_seconds: f64,
    pub files: Vec<String>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::parse(path, e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSummary {
    pub agent: usize,
    pub seed: u64,
    pub evaluations: usize,
    pub feasible_evaluations: usize,
    pub front_size: usize,
    pub hypervolume: f64,
}

/// Hypervolume report of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub label: String,
    pub optimizer: OptimizerKind,
    pub scenario: String,
    pub status: RunStatus,
    pub reference: [f64; 2],
    pub hypervolume: f64,
    pub front_size: usize,
    pub evaluations: usize,
    pub min_lcoe: Option<FrontPoint>,
    pub min_f_dh: Option<FrontPoint>,
    pub agents: Vec<AgentSummary>,
}

pub fn build_report(config: &RunConfig, scenario: &ScenarioFile, result: &RunResult) -> Result<(FrontReport, RunReport)> {
    let label = config.label();
    let front = FrontReport::new(label.clone(), result.merged.clone(), result.reference())?;
    let mut agents = Vec::new();
    for a in &result.agents {
        let r = FrontReport::new("", a.front.clone(), Some(front.reference))?;
        agents.push(AgentSummary {
            agent: a.agent,
            seed: a.seed,
            evaluations: a.history.len(),
            feasible_evaluations: a.history.iter().filter(|h| h.feasible).count(),
            front_size: a.front.len(),
            hypervolume: r.hypervolume,
        });
    }
    let report = RunReport {
        label,
        optimizer: config.optimizer,
        scenario: scenario.scenario.name.clone(),
        status: result.status(),
        reference: front.reference,
        hypervolume: front.hypervolume,
        front_size: front.points.len(),
        evaluations: result.evaluations(),
        min_lcoe: front.best(0).cloned(),
        min_f_dh: front.best(1).cloned(),
        agents,
    };
    Ok((front, report))
}

/// F_Δh limit of the scenario, if it constrains `f_dh` from above.
pub fn f_dh_limit(scenario: &ScenarioFile) -> Option<f64> {
    scenario.constraints.iter().find_map(|c| match c.direction {
        hpmr_core::Direction::AtMost { limit } if c.quantity == "f_dh" => Some(limit),
        _ => None,
    })
}

/// Writes every output file of a run under `dir` and returns the manifest.
pub fn write_run(dir: &Path, config: &RunConfig, scenario: &ScenarioFile, result: &RunResult) -> Result<Manifest> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files: Vec<PathBuf> = Vec::new();
    let mut put = |rel: PathBuf, text: String| -> Result<()> {
        formats::write_text(&dir.join(&rel), &text)?;
        files.push(rel);
        Ok(())
    };
    let (front, report) = build_report(config, scenario, result)?;
    put("front.csv".into(), formats::front_report_to_csv(&front)?)?;
    put("report.json".into(), json(&report)?)?;
    let archive: Vec<&FrontPoint> = match &result.shared_archive {
        Some(rows) => rows.iter().map(|r| &r.point).collect(),
        None => result.agents.iter().flat_map(|a| a.archive.iter().map(|r| &r.point)).collect(),
    };
    let scatter = Scatter::from_points(front.label.clone(), archive, &front.points, f_dh_limit(scenario));
    put("front.svg".into(), render_scatter(&scatter))?;
    if let Some(rows) = &result.shared_archive {
        put("archive.csv".into(), formats::buffer_snapshot_to_csv(rows)?)?;
    }
    for a in &result.agents {
        let sub = PathBuf::from(format!("agent-{}", a.agent));
        put(sub.join("history.csv"), formats::history_to_csv(&a.history))?;
        if result.shared_archive.is_none() {
            put(sub.join("archive.csv"), formats::buffer_snapshot_to_csv(&a.archive)?)?;
        }
        let own = FrontReport::new(format!("{}-agent-{}", front.label, a.agent), a.front.clone(), Some(front.reference))?;
        put(sub.join("front.csv"), formats::front_report_to_csv(&own)?)?;
        if !a.updates.is_empty() {
            put(sub.join("updates.csv"), formats::updates_to_csv(&a.updates))?;
        }
        for c in &a.checkpoints {
            put(sub.join("checkpoints").join(format!("step-{}.json", c.step)), json(c)?)?;
        }
    }
    if !result.failures.is_empty() {
        put("failures.json".into(), json(&result.failures)?)?;
    }
    let mut files: Vec<String> = files.iter().map(|p| p.to_string_lossy().replace('\\', "/")).collect();
    files.push("manifest.json".into());
    let manifest = Manifest {
        label: config.label(),
        versions: vec![
            ("hpmr".into(), env!("CARGO_PKG_VERSION").into()),
            ("hpmr-core".into(), hpmr_core::VERSION.into()),
        ],
        config: config.clone(),
        scenario: scenario.clone(),
        seeds: config.seeds(),
        evaluations: result.evaluations(),
        status: result.status(),
        truncated: result.truncated,
        failed_agents: result.failures.iter().map(|f| f.agent).collect(),
        elapsed_seconds: result.elapsed_seconds,
        files,
    };
    formats::write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
