use hpmr_core::econ::{build_cash_flows, cost_breakdown, lcoe, CashFlowSchedule};
use hpmr_core::env::{HpmrEnv, QoIVector};
use hpmr_core::{CostScenario, DesignVector, EconParams};
use proptest::prelude::*;

fn econ(r: f64) -> EconParams {
    EconParams {
        discount_rate: r,
        ..EconParams::default()
    }
}

fn constant_schedule(n: u32, c: f64) -> CashFlowSchedule {
    let mut s = CashFlowSchedule::zeros(n);
    for y in &mut s.years {
        y.om = c;
    }
    s
}

#[test]
fn annuity_invariance() {
    for r in [0.0, 0.06, 0.2] {
        let e = econ(r);
        let v = lcoe(&constant_schedule(e.plant_life, 1234.5), &e).unwrap();
        let want = 1234.5 / e.annual_energy;
        assert!(((v - want) / want).abs() < 1e-12, "r = {r}");
    }
}

#[test]
fn longer_lifetime_never_costs_more() {
    let d = DesignVector::NOMINAL;
    let s = CostScenario::scenario_1();
    let e = EconParams::default();
    let mut last = f64::INFINITY;
    for k in 1..=30 {
        let q = QoIVector {
            lifetime: 0.5 * k as f64,
            uranium_mass: 525.06,
            ..QoIVector::default()
        };
        let v = lcoe(&build_cash_flows(&d, &q, &s, &e).unwrap(), &e).unwrap();
        assert!(v <= last + 1e-9);
        last = v;
    }
}

#[test]
fn breakdown_sums_to_total() {
    let env = HpmrEnv::new(CostScenario::scenario_2());
    let ev = env.evaluate_design(&DesignVector::NOMINAL).unwrap();
    let b = cost_breakdown(&ev.schedule, &env.econ);
    let direct: f64 = ev
        .schedule
        .years
        .iter()
        .map(|y| y.total() * env.econ.discount_factor(y.year))
        .sum();
    assert!(((b.total() - direct) / direct).abs() < 1e-9);
    assert!((b.shares().iter().sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn zero_prices_zero_schedule() {
    let s = CostScenario::scenario_1().scaled(0.0);
    let q = QoIVector {
        lifetime: 6.99,
        uranium_mass: 525.06,
        ..QoIVector::default()
    };
    let sched = build_cash_flows(&DesignVector::NOMINAL, &q, &s, &EconParams::default()).unwrap();
    assert!(sched.years.iter().all(|y| y.total() == 0.0));
}

proptest! {
    #[test]
    fn price_homogeneity(alpha in 0.01f64..100.0, u in proptest::array::uniform7(0.0f64..=1.0)) {
        let d = DesignVector::from_unit_cube(&u).unwrap();
        let q = QoIVector { lifetime: 8.0, uranium_mass: 500.0, ..QoIVector::default() };
        let e = EconParams::default();
        let base = CostScenario::scenario_3();
        let a = lcoe(&build_cash_flows(&d, &q, &base, &e).unwrap(), &e).unwrap();
        let b = lcoe(&build_cash_flows(&d, &q, &base.scaled(alpha), &e).unwrap(), &e).unwrap();
        prop_assert!(((b - alpha * a) / (alpha * a)).abs() < 1e-12);
    }
}
