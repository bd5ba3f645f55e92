//! Yearly cash flows and the levelized cost of electricity.
//!
//! The cost ledger is deliberately small: fixed capital plus periodic
//! equipment replacement, constant O&M, fuel batches sized by the uranium
//! inventory, and material purchases for the axial reflector and the control
//! drums. Every coefficient is configurable through [`CostScenario`].

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::design::DesignVector;
use crate::env::QoIVector;
use crate::error::{Error, Result};

/// Hours per average year.
pub const HOURS_PER_YEAR: f64 = 8766.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconParams {
    /// Discount rate per year.
    pub discount_rate: f64,
    /// Plant life in years; flows span years `0..=plant_life`.
    pub plant_life: u32,
    /// Main equipment replacement period, years.
    pub replacement_period: f64,
    /// Constant net electrical energy per year, MWh.
    pub annual_energy: f64,
}

impl EconParams {
    /// Electrical energy per year from thermal power (MW), conversion
    /// efficiency and capacity factor.
    pub fn annual_energy_from(thermal_mw: f64, efficiency: f64, capacity_factor: f64) -> f64 {
        thermal_mw * HOURS_PER_YEAR * efficiency * capacity_factor
    }

    pub fn check(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.discount_rate) {
            return Err(Error::Econ("discount rate must lie in [0, 1)".to_string()));
        }
        if self.plant_life < 1 {
            return Err(Error::Econ("plant life must be at least one year".to_string()));
        }
        if !(self.replacement_period >= 1.0) {
            return Err(Error::Econ("replacement period must be at least one year".to_string()));
        }
        if !(self.annual_energy >= 0.0 && self.annual_energy.is_finite()) {
            return Err(Error::Econ("annual energy must be finite and non-negative".to_string()));
        }
        Ok(())
    }

    pub fn discount_factor(&self, year: u32) -> f64 {
        libm::pow(1.0 + self.discount_rate, -(year as f64))
    }
}

impl Default for EconParams {
    /// 6% discounting over 60 years, replacement every 10 years, and 2 MWth
    /// at 35% efficiency and 95% capacity factor. Efficiency and capacity
    /// factor are assumptions of this crate.
    fn default() -> Self {
        EconParams {
            discount_rate: 0.06,
            plant_life: 60,
            replacement_period: 10.0,
            annual_energy: Self::annual_energy_from(2.0, 0.35, 0.95),
        }
    }
}

/// Prices and mass models for one material-cost scenario. Prices are per kg
/// (fuel per kg of uranium); capital and O&M in currency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostScenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub axial_reflector_price: f64,
    pub drum_reflector_price: f64,
    pub absorber_price: f64,
    pub fuel_price: f64,
    pub fixed_capital: f64,
    pub annual_om: f64,
    /// Fraction of the fixed capital spent again at every replacement.
    pub replacement_fraction: f64,
    /// Height budget shared by the active core and the axial reflectors, cm.
    pub vessel_height: f64,
    /// Axial reflector mass per cm of reflector height, kg/cm.
    pub axial_reflector_kg_per_cm: f64,
    /// Drum reflector mass, kg.
    pub drum_reflector_kg: f64,
    /// Absorber mass for a full 360 degree coating, kg.
    pub absorber_kg_full_coating: f64,
    /// Relative absorber price increase per unit B-10 enrichment.
    pub b10_premium: f64,
}

impl CostScenario {
    fn base(name: &str, description: &str, axial: f64, drum: f64) -> Self {
        CostScenario {
            name: name.to_string(),
            description: description.to_string(),
            axial_reflector_price: axial,
            drum_reflector_price: drum,
            absorber_price: 14_268.0,
            fuel_price: 20_000.0,
            fixed_capital: 60.0e6,
            annual_om: 4.0e6,
            replacement_fraction: 0.3,
            vessel_height: 230.0,
            axial_reflector_kg_per_cm: 21.0,
            drum_reflector_kg: 600.0,
            absorber_kg_full_coating: 1000.0,
            b10_premium: 1.0,
        }
    }

    /// Beryllium axial and drum reflectors at $45,000/kg.
    pub fn scenario_1() -> Self {
        Self::base(
            "scenario-1",
            "expensive beryllium axial and control drum reflectors",
            45_000.0,
            45_000.0,
        )
    }

    /// Graphite-priced axial reflector ($80/kg), expensive drums.
    pub fn scenario_2() -> Self {
        Self::base(
            "scenario-2",
            "inexpensive axial reflector, expensive control drum reflectors",
            80.0,
            45_000.0,
        )
    }

    /// Graphite-priced axial and drum reflectors; B4C stays at $14,268/kg.
    pub fn scenario_3() -> Self {
        Self::base(
            "scenario-3",
            "inexpensive axial and drum reflectors",
            80.0,
            80.0,
        )
    }

    pub fn presets() -> Vec<CostScenario> {
        alloc::vec![Self::scenario_1(), Self::scenario_2(), Self::scenario_3()]
    }

    pub fn preset(name: &str) -> Option<CostScenario> {
        Self::presets().into_iter().find(|s| s.name == name)
    }

    pub fn check(&self) -> Result<()> {
        let prices = [
            ("axial_reflector_price", self.axial_reflector_price),
            ("drum_reflector_price", self.drum_reflector_price),
            ("absorber_price", self.absorber_price),
            ("fuel_price", self.fuel_price),
            ("fixed_capital", self.fixed_capital),
            ("annual_om", self.annual_om),
            ("replacement_fraction", self.replacement_fraction),
            ("vessel_height", self.vessel_height),
            ("axial_reflector_kg_per_cm", self.axial_reflector_kg_per_cm),
            ("drum_reflector_kg", self.drum_reflector_kg),
            ("absorber_kg_full_coating", self.absorber_kg_full_coating),
            ("b10_premium", self.b10_premium),
        ];
        for (name, v) in prices {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Econ(alloc::format!("{name} must be finite and non-negative")));
            }
        }
        Ok(())
    }

    pub fn axial_reflector_mass(&self, d: &DesignVector) -> f64 {
        self.axial_reflector_kg_per_cm * (self.vessel_height - d.x_fh).max(0.0)
    }

    pub fn absorber_mass(&self, d: &DesignVector) -> f64 {
        self.absorber_kg_full_coating * d.x_ca / 360.0
    }

    /// Drum reflector plus enriched absorber purchase.
    pub fn reactivity_control_cost(&self, d: &DesignVector) -> f64 {
        self.drum_reflector_kg * self.drum_reflector_price
            + self.absorber_mass(d) * self.absorber_price * (1.0 + self.b10_premium * d.x_b10)
    }

    pub fn reflector_cost(&self, d: &DesignVector) -> f64 {
        self.axial_reflector_mass(d) * self.axial_reflector_price
    }

    /// Uniform scaling of every price and capital figure.
    pub fn scaled(&self, factor: f64) -> Self {
        CostScenario {
            axial_reflector_price: self.axial_reflector_price * factor,
            drum_reflector_price: self.drum_reflector_price * factor,
            absorber_price: self.absorber_price * factor,
            fuel_price: self.fuel_price * factor,
            fixed_capital: self.fixed_capital * factor,
            annual_om: self.annual_om * factor,
            ..self.clone()
        }
    }
}

/// Cost categories of one year.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct YearFlow {
    pub year: u32,
    pub fuel: f64,
    pub om: f64,
    pub capital: f64,
    pub reactivity_control: f64,
    pub reflector: f64,
}

impl YearFlow {
    /// Total capital invested: plant capital plus reflector and drum purchases.
    pub fn total_capital(&self) -> f64 {
        self.capital + self.reactivity_control + self.reflector
    }

    pub fn total(&self) -> f64 {
        self.fuel + self.om + self.total_capital()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CashFlowSchedule {
    /// One record per year `0..=n`.
    pub years: Vec<YearFlow>,
}

impl CashFlowSchedule {
    pub fn zeros(plant_life: u32) -> Self {
        CashFlowSchedule {
            years: (0..=plant_life)
                .map(|year| YearFlow {
                    year,
                    ..Default::default()
                })
                .collect(),
        }
    }

    pub fn fuel_years(&self) -> Vec<u32> {
        self.years.iter().filter(|y| y.fuel > 0.0).map(|y| y.year).collect()
    }
}

/// Years at which something purchased every `interval` years is bought:
/// year 0 and the ceiling of every later multiple strictly inside the plant
/// life.
pub fn purchase_years(interval: f64, plant_life: u32) -> Vec<u32> {
    let mut years = alloc::vec![0];
    let mut k = 1u32;
    loop {
        let t = libm::ceil(k as f64 * interval - 1e-9);
        if t >= plant_life as f64 {
            break;
        }
        years.push(t as u32);
        k += 1;
    }
    years
}

pub fn build_cash_flows(
    d: &DesignVector,
    qoi: &QoIVector,
    scenario: &CostScenario,
    econ: &EconParams,
) -> Result<CashFlowSchedule> {
    econ.check()?;
    scenario.check()?;
    if !(qoi.lifetime > 0.0) {
        return Err(Error::Econ("fuel lifetime must be positive".to_string()));
    }
    let n = econ.plant_life;
    let mut schedule = CashFlowSchedule::zeros(n);

    let batch = qoi.uranium_mass * scenario.fuel_price;
    let interval = qoi.lifetime.min(econ.replacement_period);
    for t in purchase_years(interval, n) {
        schedule.years[t as usize].fuel += batch;
    }

    let control = scenario.reactivity_control_cost(d);
    let reflector = scenario.reflector_cost(d);
    for t in purchase_years(econ.replacement_period, n) {
        let y = &mut schedule.years[t as usize];
        y.capital += if t == 0 {
            scenario.fixed_capital
        } else {
            scenario.replacement_fraction * scenario.fixed_capital
        };
        y.reactivity_control += control;
        y.reflector += reflector;
    }

    for y in &mut schedule.years {
        y.om += scenario.annual_om;
    }
    Ok(schedule)
}

/// Discounted cost over discounted energy, years `0..=n`.
pub fn lcoe(schedule: &CashFlowSchedule, econ: &EconParams) -> Result<f64> {
    if econ.annual_energy == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let mut cost = 0.0;
    let mut energy = 0.0;
    for y in &schedule.years {
        let df = econ.discount_factor(y.year);
        cost += y.total() * df;
        energy += econ.annual_energy * df;
    }
    Ok(cost / energy)
}

/// Discounted totals per category.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub fuel: f64,
    pub om: f64,
    pub capital: f64,
    pub reactivity_control: f64,
    pub reflector: f64,
}

impl CostBreakdown {
    pub const CATEGORIES: [&'static str; 5] = ["fuel", "om", "capital", "reactivity_control", "reflector"];

    pub fn total(&self) -> f64 {
        self.fuel + self.om + self.capital + self.reactivity_control + self.reflector
    }

    pub fn values(&self) -> [f64; 5] {
        [self.fuel, self.om, self.capital, self.reactivity_control, self.reflector]
    }

    /// Fraction of the discounted total per category; all zero when the
    /// total is zero.
    pub fn shares(&self) -> [f64; 5] {
        let total = self.total();
        let v = self.values();
        if total == 0.0 {
            return [0.0; 5];
        }
        v.map(|x| x / total)
    }
}

pub fn cost_breakdown(schedule: &CashFlowSchedule, econ: &EconParams) -> CostBreakdown {
    let mut b = CostBreakdown::default();
    for y in &schedule.years {
        let df = econ.discount_factor(y.year);
        b.fuel += y.fuel * df;
        b.om += y.om * df;
        b.capital += y.capital * df;
        b.reactivity_control += y.reactivity_control * df;
        b.reflector += y.reflector * df;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn econ(r: f64, n: u32, e: f64) -> EconParams {
        EconParams {
            discount_rate: r,
            plant_life: n,
            replacement_period: 10.0,
            annual_energy: e,
        }
    }

    fn qoi(lifetime: f64) -> QoIVector {
        QoIVector {
            lifetime,
            uranium_mass: 525.06,
            ..QoIVector::default()
        }
    }

    #[test]
    fn undiscounted_ratio() {
        let mut s = CashFlowSchedule::zeros(2);
        s.years[0].capital = 300.0;
        s.years[2].fuel = 300.0;
        assert!((lcoe(&s, &econ(0.0, 2, 100.0)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn three_year_hand_case() {
        let mut s = CashFlowSchedule::zeros(2);
        s.years[0].capital = 100.0;
        s.years[1].om = 50.0;
        s.years[2].om = 50.0;
        let v = lcoe(&s, &econ(0.06, 2, 10.0)).unwrap();
        assert!((v - 6.7647).abs() < 1e-4, "{v}");
    }

    #[test]
    fn zero_energy() {
        let s = CashFlowSchedule::zeros(2);
        assert_eq!(lcoe(&s, &econ(0.06, 2, 0.0)), Err(Error::ZeroEnergy));
    }

    #[test]
    fn refuel_capped_by_replacement() {
        let d = DesignVector::NOMINAL;
        let s = build_cash_flows(&d, &qoi(14.03), &CostScenario::scenario_1(), &EconParams::default()).unwrap();
        assert_eq!(s.fuel_years(), alloc::vec![0, 10, 20, 30, 40, 50]);
    }

    #[test]
    fn refuel_every_seventh_year() {
        let d = DesignVector::NOMINAL;
        let s = build_cash_flows(&d, &qoi(6.99), &CostScenario::scenario_1(), &EconParams::default()).unwrap();
        assert_eq!(s.fuel_years(), alloc::vec![0, 7, 14, 21, 28, 35, 42, 49, 56]);
    }

    #[test]
    fn zero_prices_zero_schedule() {
        let d = DesignVector::NOMINAL;
        let free = CostScenario::scenario_1().scaled(0.0);
        let free = CostScenario {
            axial_reflector_price: 0.0,
            ..free
        };
        let s = build_cash_flows(&d, &qoi(6.99), &free, &EconParams::default()).unwrap();
        assert!(s.years.iter().all(|y| y.total() == 0.0));
    }

    #[test]
    fn non_positive_lifetime_rejected() {
        let d = DesignVector::NOMINAL;
        assert!(build_cash_flows(&d, &qoi(0.0), &CostScenario::scenario_1(), &EconParams::default()).is_err());
    }

    #[test]
    fn breakdown_single_category() {
        let mut s = CashFlowSchedule::zeros(3);
        for y in &mut s.years {
            y.om = 7.0;
        }
        let shares = cost_breakdown(&s, &econ(0.06, 3, 1.0)).shares();
        assert_eq!(shares, [0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn breakdown_even_split() {
        let mut s = CashFlowSchedule::zeros(3);
        s.years[0].fuel = 5.0;
        s.years[0].capital = 5.0;
        let shares = cost_breakdown(&s, &econ(0.06, 3, 1.0)).shares();
        assert_eq!(shares, [0.5, 0.0, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn cheap_reflectors_keep_absorber_cost() {
        let d = DesignVector::NOMINAL;
        let s = build_cash_flows(&d, &qoi(6.99), &CostScenario::scenario_3(), &EconParams::default()).unwrap();
        let b = cost_breakdown(&s, &EconParams::default());
        assert!(b.shares()[3] > 0.01, "{:?}", b.shares());
    }

    #[test]
    fn purchase_year_rounding() {
        assert_eq!(purchase_years(10.0, 60), alloc::vec![0, 10, 20, 30, 40, 50]);
        assert_eq!(purchase_years(2.5, 10), alloc::vec![0, 3, 5, 8]);
    }
}
