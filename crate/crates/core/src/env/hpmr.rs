use super::proxy::{proxy_eval, ProxyModelConfig};
use super::qoi::{Neutronics, QoIVector};
use super::relations;
use super::tabular::TabularModel;
use super::{Environment, Outcome};
use crate::constraints::{ConstraintReport, ConstraintSet};
use crate::design::{DesignVector, DIM};
use crate::econ::{self, CashFlowSchedule, CostScenario, EconParams};
use crate::error::{Error, Result};

/// Source of the neutronics quantities. The closed-form relations always
/// use the constants of the proxy configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluator {
    Proxy(ProxyModelConfig),
    Tabular {
        model: TabularModel,
        constants: ProxyModelConfig,
    },
}

impl Evaluator {
    pub fn constants(&self) -> &ProxyModelConfig {
        match self {
            Evaluator::Proxy(c) => c,
            Evaluator::Tabular { constants, .. } => constants,
        }
    }

    pub fn neutronics(&self, d: &DesignVector) -> Result<Neutronics> {
        match self {
            Evaluator::Proxy(c) => proxy_eval(d, c),
            Evaluator::Tabular { model, .. } => Ok(model.eval(d)),
        }
    }
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::Proxy(ProxyModelConfig::default())
    }
}

/// Everything one design evaluation produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// `[lcoe, f_dh]`.
    pub objectives: [f64; 2],
    pub report: ConstraintReport,
    pub qoi: QoIVector,
    pub schedule: CashFlowSchedule,
}

/// Full microreactor evaluation: neutronics, closed-form relations, cost
/// and constraints.
pub fn evaluate(
    d: &DesignVector,
    scenario: &CostScenario,
    econ_params: &EconParams,
    constraints: &ConstraintSet,
    evaluator: &Evaluator,
) -> Result<Evaluation> {
    if let Err(v) = d.validate() {
        return Err(Error::Evaluation(alloc::format!("design out of bounds: {}", v[0])));
    }
    let n = evaluator.neutronics(d)?;
    let c = evaluator.constants();
    let q_avg = relations::avg_heat_flux(d.x_cr, d.x_fh, c.heat_flux_constant)?;
    let uranium_mass = relations::uranium_mass(d.x_cr, d.x_fh, c.uranium_coefficient)?;
    let mut qoi = QoIVector {
        lifetime: n.lifetime,
        sdm: n.sdm,
        f_dh: n.f_dh,
        q_max: n.q_max,
        q_avg,
        uranium_mass,
        u235_mass: relations::u235_mass(uranium_mass, d.x_e)?,
        burnup: relations::burnup(n.lifetime, uranium_mass, c.thermal_power)?,
        power_density: relations::power_density(q_avg, d.x_cr)?,
        lcoe: 0.0,
        itc: n.itc,
        extrapolated: n.extrapolated,
    };
    let schedule = econ::build_cash_flows(d, &qoi, scenario, econ_params)?;
    qoi.lcoe = econ::lcoe(&schedule, econ_params)?;
    let report = constraints.evaluate(&qoi)?;
    if !qoi.lcoe.is_finite() || !qoi.f_dh.is_finite() {
        return Err(Error::Evaluation("non-finite objective".into()));
    }
    Ok(Evaluation {
        objectives: [qoi.lcoe, qoi.f_dh],
        report,
        qoi,
        schedule,
    })
}

/// The microreactor problem over the 7-dimensional unit cube.
#[derive(Debug, Clone, PartialEq)]
pub struct HpmrEnv {
    pub scenario: CostScenario,
    pub econ: EconParams,
    pub constraints: ConstraintSet,
    pub evaluator: Evaluator,
}

impl HpmrEnv {
    pub fn new(scenario: CostScenario) -> Self {
        HpmrEnv {
            scenario,
            econ: EconParams::default(),
            constraints: ConstraintSet::default(),
            evaluator: Evaluator::default(),
        }
    }

    pub fn evaluate_design(&self, d: &DesignVector) -> Result<Evaluation> {
        evaluate(d, &self.scenario, &self.econ, &self.constraints, &self.evaluator)
    }
}

impl Environment for HpmrEnv {
    fn dim(&self) -> usize {
        DIM
    }

    fn objectives(&self) -> usize {
        2
    }

    fn evaluate(&self, u: &[f64]) -> Result<Outcome> {
        let d = DesignVector::from_unit_cube(u)?;
        let e = self.evaluate_design(&d)?;
        Ok(Outcome {
            objectives: e.objectives.to_vec(),
            feasible: e.report.feasible,
            penalty: e.report.penalty,
            design: d.to_array().to_vec(),
            qoi: Some(e.qoi),
        })
    }
}
