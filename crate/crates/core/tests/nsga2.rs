use std::sync::Mutex;

use hpmr_core::env::toy::SphereToy;
use hpmr_core::env::HpmrEnv;
use hpmr_core::nsga2::{run_nsga2, GaConfig};
use hpmr_core::pareto::nondominated_sort;
use hpmr_core::{CostScenario, DesignVector, Environment, Outcome, Result};

/// Records every design it is asked to evaluate.
struct Recorder<E> {
    inner: E,
    seen: Mutex<Vec<Vec<f64>>>,
}

impl<E: Environment> Environment for Recorder<E> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn objectives(&self) -> usize {
        self.inner.objectives()
    }
    fn evaluate(&self, u: &[f64]) -> Result<Outcome> {
        self.seen.lock().unwrap().push(u.to_vec());
        self.inner.evaluate(u)
    }
}

#[test]
fn every_evaluated_design_is_in_bounds() {
    let env = Recorder {
        inner: HpmrEnv::new(CostScenario::scenario_1()),
        seen: Mutex::new(Vec::new()),
    };
    let cfg = GaConfig {
        population: 32,
        generations: 10,
        ..GaConfig::default()
    };
    let run = run_nsga2(&env, &cfg).unwrap();
    let seen = env.seen.lock().unwrap();
    assert_eq!(seen.len(), run.evaluations);
    for u in seen.iter() {
        assert!(DesignVector::from_unit_cube(u).unwrap().validate().is_ok());
    }
}

#[test]
fn survivors_keep_feasible_first_front() {
    // once any feasible point exists, the population's first front is feasible
    let cfg = GaConfig {
        population: 16,
        generations: 20,
        ..GaConfig::default()
    };
    let run = run_nsga2(&SphereToy::new(0.6), &cfg).unwrap();
    let pts: Vec<_> = run.population.iter().map(|i| i.point.clone()).collect();
    let fronts = nondominated_sort(&pts);
    if pts.iter().any(|p| p.feasible) {
        assert!(fronts[0].iter().all(|&i| pts[i].feasible));
        let first_infeasible = run.population.iter().position(|i| !i.point.feasible);
        if let Some(k) = first_infeasible {
            assert!(run.population[k..].iter().all(|i| !i.point.feasible));
        }
    }
}
