//! NSGA-II on the unit cube with constrained dominance, the reference
//! evolutionary baseline.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::Environment;
use crate::error::{Error, Result};
use crate::metrics::{merge_fronts, FrontPoint, StepRecord};
use crate::pareto::{dominates_unchecked, rank_order, DistanceMetric, ObjectivePoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    /// Per-variable mutation probability; `None` means `1 / dim`.
    pub mutation_prob: Option<f64>,
    pub mutation_eta: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 64,
            generations: 100,
            crossover_prob: 0.9,
            crossover_eta: 15.0,
            mutation_prob: None,
            mutation_eta: 20.0,
            seed: 0,
        }
    }
}

impl GaConfig {
    /// Largest generation count whose evaluations fit in `budget`.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.generations = (budget / self.population.max(1)).saturating_sub(1);
        self
    }

    pub fn evaluations(&self) -> usize {
        self.population * (self.generations + 1)
    }

    pub fn check(&self) -> Result<()> {
        if self.population < 2 || self.population % 2 != 0 {
            return Err(Error::Config("population must be even and at least 2".into()));
        }
        let p_ok = |p: f64| (0.0..=1.0).contains(&p);
        if !p_ok(self.crossover_prob) || !self.mutation_prob.map_or(true, p_ok) {
            return Err(Error::Config("probabilities must lie in [0, 1]".into()));
        }
        if !(self.crossover_eta >= 0.0 && self.mutation_eta >= 0.0) {
            return Err(Error::Config("distribution indices must be non-negative".into()));
        }
        Ok(())
    }
}

/// An evaluated individual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub u: Vec<f64>,
    pub point: ObjectivePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaRun {
    /// Final population in survival order.
    pub population: Vec<Individual>,
    /// Feasible non-dominated members of the final population.
    pub front: Vec<FrontPoint>,
    pub evaluations: usize,
    pub history: Vec<StepRecord>,
}

struct Ga<'a, E> {
    env: &'a E,
    history: Vec<StepRecord>,
}

impl<E: Environment> Ga<'_, E> {
    fn evaluate(&mut self, u: Vec<f64>) -> Result<Individual> {
        let o = self.env.evaluate(&u)?;
        let id = self.history.len() as u64;
        let point = if o.feasible {
            ObjectivePoint::feasible(o.objectives, id)
        } else {
            ObjectivePoint::infeasible(o.objectives, o.penalty, id)
        }
        .with_design(o.design);
        self.history.push(StepRecord {
            agent: 0,
            step: id as usize,
            reward: -point.penalty,
            feasible: point.feasible,
            penalty: point.penalty,
            objectives: [point.objectives[0], point.objectives[1]],
        });
        Ok(Individual { u, point })
    }
}

/// Runs the generational loop: binary tournaments under constrained
/// dominance then crowding, simulated-binary crossover, polynomial mutation
/// and elitist (front, crowding) survival over parents plus offspring.
pub fn run_nsga2<E: Environment>(env: &E, config: &GaConfig) -> Result<GaRun> {
    config.check()?;
    let dim = env.dim();
    let n = config.population;
    let pm = config.mutation_prob.unwrap_or(1.0 / dim as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut ga = Ga {
        env,
        history: Vec::with_capacity(config.evaluations()),
    };

    let mut pop = Vec::with_capacity(n);
    for _ in 0..n {
        let u: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        pop.push(ga.evaluate(u)?);
    }
    let (mut pop, mut front, mut crowd) = survive(pop, n)?;

    for _ in 0..config.generations {
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let a = tournament(&pop, &front, &crowd, &mut rng);
            let b = tournament(&pop, &front, &crowd, &mut rng);
            let (mut c1, mut c2) = (pop[a].u.clone(), pop[b].u.clone());
            if rng.gen::<f64>() < config.crossover_prob {
                sbx(&mut c1, &mut c2, config.crossover_eta, &mut rng);
            }
            for c in [&mut c1, &mut c2] {
                polynomial_mutation(c, pm, config.mutation_eta, &mut rng);
            }
            offspring.push(ga.evaluate(c1)?);
            offspring.push(ga.evaluate(c2)?);
        }
        pop.extend(offspring);
        (pop, front, crowd) = survive(pop, n)?;
    }

    let points: Vec<FrontPoint> = pop
        .iter()
        .map(|i| FrontPoint::from_objective_point(0, &i.point))
        .collect();
    Ok(GaRun {
        front: merge_fronts([points.as_slice()]),
        population: pop,
        evaluations: ga.history.len(),
        history: ga.history,
    })
}

type Survivors = (Vec<Individual>, Vec<usize>, Vec<f64>);

/// Keeps the best `n` by (front, crowding); returns them with their front
/// index and crowding distance.
fn survive(pool: Vec<Individual>, n: usize) -> Result<Survivors> {
    let points: Vec<ObjectivePoint> = pool.iter().map(|i| i.point.clone()).collect();
    let seq: Vec<u64> = (0..points.len() as u64).collect();
    let ranking = rank_order(&points, &seq, DistanceMetric::Crowding, &[])?;
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    let mut kept = Vec::with_capacity(n);
    let mut front = Vec::with_capacity(n);
    let mut crowd = Vec::with_capacity(n);
    for &i in ranking.order.iter().take(n) {
        kept.push(slots[i].take().expect("ranking visits each index once"));
        front.push(ranking.front[i]);
        crowd.push(ranking.distance[i]);
    }
    Ok((kept, front, crowd))
}

fn tournament<R: Rng>(pop: &[Individual], front: &[usize], crowd: &[f64], rng: &mut R) -> usize {
    let a = rng.gen_range(0..pop.len());
    let b = rng.gen_range(0..pop.len());
    if dominates_unchecked(&pop[a].point, &pop[b].point) {
        a
    } else if dominates_unchecked(&pop[b].point, &pop[a].point) {
        b
    } else if front[a] != front[b] {
        if front[a] < front[b] {
            a
        } else {
            b
        }
    } else if crowd[a] > crowd[b] {
        a
    } else if crowd[b] > crowd[a] {
        b
    } else if rng.gen::<bool>() {
        a
    } else {
        b
    }
}

/// Bounded simulated-binary crossover on `[0, 1]`.
fn sbx<R: Rng>(x1: &mut [f64], x2: &mut [f64], eta: f64, rng: &mut R) {
    let e = 1.0 / (eta + 1.0);
    for k in 0..x1.len() {
        if rng.gen::<f64>() > 0.5 || libm::fabs(x1[k] - x2[k]) < 1e-14 {
            continue;
        }
        let (y1, y2) = if x1[k] < x2[k] { (x1[k], x2[k]) } else { (x2[k], x1[k]) };
        let r = rng.gen::<f64>();
        let spread = |beta: f64| {
            let alpha = 2.0 - libm::pow(beta, -(eta + 1.0));
            if r <= 1.0 / alpha {
                libm::pow(r * alpha, e)
            } else {
                libm::pow(1.0 / (2.0 - r * alpha), e)
            }
        };
        let d = y2 - y1;
        let bq1 = spread(1.0 + 2.0 * y1 / d);
        let bq2 = spread(1.0 + 2.0 * (1.0 - y2) / d);
        let c1 = (0.5 * ((y1 + y2) - bq1 * d)).clamp(0.0, 1.0);
        let c2 = (0.5 * ((y1 + y2) + bq2 * d)).clamp(0.0, 1.0);
        if rng.gen::<bool>() {
            x1[k] = c2;
            x2[k] = c1;
        } else {
            x1[k] = c1;
            x2[k] = c2;
        }
    }
}

/// Bounded polynomial mutation on `[0, 1]`.
fn polynomial_mutation<R: Rng>(x: &mut [f64], prob: f64, eta: f64, rng: &mut R) {
    let e = 1.0 / (eta + 1.0);
    for v in x.iter_mut() {
        if rng.gen::<f64>() >= prob {
            continue;
        }
        let y = *v;
        let r = rng.gen::<f64>();
        let dq = if r < 0.5 {
            let t = 2.0 * r + (1.0 - 2.0 * r) * libm::pow(1.0 - y, eta + 1.0);
            libm::pow(t, e) - 1.0
        } else {
            let t = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * libm::pow(y, eta + 1.0);
            1.0 - libm::pow(t, e)
        };
        *v = (y + dq).clamp(0.0, 1.0);
    }
}
