//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hpmr::runner::{run_pearl, Limits};
use hpmr_core::constraints::{phi, ConstraintSpec, Direction};
use hpmr_core::design::{DesignVector, DIM};
use hpmr_core::econ::{build_cash_flows, lcoe, CashFlowSchedule};
use hpmr_core::env::relations::{
    avg_heat_flux, burnup, power_density, u235_mass, uranium_mass, HEAT_FLUX_CONSTANT, THERMAL_POWER_MW,
    URANIUM_COEFFICIENT,
};
use hpmr_core::env::{HpmrEnv, QoIVector};
use hpmr_core::metrics::{default_reference, hypervolume_2d, nondominated_indices};
use hpmr_core::pareto::{crowding_distance, nondominated_sort, ObjectivePoint, ParetoBuffer};
use hpmr_core::pearl::policy::{sample_action, Policy};
use hpmr_core::pearl::ppo::{loss, loss_and_grad, Batch, LossCoefficients, Transition};
use hpmr_core::pearl::PearlConfig;
use hpmr_core::{CostScenario, DistanceMetric, EconParams, Environment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

// ------------------------------------------------------------ criterion 1

/// Reported column: inputs, true lifetime, and reported
/// `(q_avg, power density, U-235, U mass, burnup)`.
struct Column {
    name: &'static str,
    x: [f64; DIM],
    lifetime: f64,
    reported: [f64; 5],
}

const NOMINAL_X: [f64; DIM] = [90.0, 0.95, 160.0, 2.3, 0.197, 1.0, 0.825];
const NOMINAL_REPORTED: [f64; 5] = [0.010536, 2.105, 103.44, 525.06, 9.725];

fn reported_columns() -> Vec<Column> {
    let c = |name, x, lifetime, reported| Column {
        name,
        x,
        lifetime,
        reported,
    };
    vec![
        c("s1 solution 1", [86.0, 0.20, 190.0, 1.94, 0.199, 0.97, 0.743], 14.03, [0.0091, 1.876, 116.746, 586.66, 17.470]),
        c("s1 solution 2", [35.0, 0.778, 190.0, 2.31, 0.199, 1.01, 0.716], 4.97, [0.0088, 1.76, 124.572, 625.99, 5.800]),
        c("s1 single-obj", [91.0, 0.53, 190.0, 2.20, 0.199, 1.10, 0.75], 11.41, [0.00806, 1.612, 149.90, 753.27, 11.07]),
        c("s1 nominal", NOMINAL_X, 6.99, NOMINAL_REPORTED),
        c("s2 solution 1", [106.7, 0.777, 178.2, 1.94, 0.186, 0.97, 0.80], 10.72, [0.00974, 2.008, 102.515, 550.241, 14.23]),
        c("s2 solution 2", [56.6, 0.504, 190.0, 2.14, 0.199, 1.07, 0.742], 9.00, [0.0083, 1.551, 142.084, 713.99, 9.21]),
        c("s2 single-obj", [96.0, 0.615, 148.36, 1.94, 0.199, 0.97, 0.689], 9.61, [0.0117, 2.412, 91.160, 458.09, 15.33]),
        c("s2 nominal", NOMINAL_X, 6.99, NOMINAL_REPORTED),
        c("s3 solution 1", [100.82, 0.20, 172.0, 1.94, 0.197, 0.908, 0.733], 6.58, [0.0108, 2.379, 91.773, 465.63, 10.32]),
        c("s3 solution 2", [35.0, 0.20, 190.0, 2.61, 0.199, 0.948, 0.702], 4.42, [0.00935, 1.973, 111.4, 559.80, 5.768]),
        c("s3 single-obj", [98.0, 0.95, 158.0, 2.78, 0.197, 1.063, 0.522], 11.42, [0.0100, 1.881, 115.82, 586.83, 14.216]),
        c("s3 nominal", NOMINAL_X, 6.99, NOMINAL_REPORTED),
    ]
}

fn criterion_1() -> Verdict {
    const NAMES: [&str; 5] = ["q_avg", "power density", "U-235", "U mass", "burnup"];
    let mut misses = Vec::new();
    let mut cells = 0;
    for col in reported_columns() {
        let [_, _, fh, _, e, cr, _] = col.x;
        let q = avg_heat_flux(cr, fh, HEAT_FLUX_CONSTANT).unwrap();
        let m = uranium_mass(cr, fh, URANIUM_COEFFICIENT).unwrap();
        let computed = [
            q,
            power_density(q, cr).unwrap(),
            u235_mass(m, e).unwrap(),
            m,
            burnup(col.lifetime, m, THERMAL_POWER_MW).unwrap(),
        ];
        for k in 0..5 {
            cells += 1;
            let err = rel(computed[k], col.reported[k]);
            if err > 0.02 {
                misses.push(format!(
                    "{} {}: {:.4} vs {} ({:.1}%)",
                    col.name,
                    NAMES[k],
                    computed[k],
                    col.reported[k],
                    100.0 * err
                ));
            }
        }
    }
    let detail = if misses.is_empty() {
        format!("{cells} cells within 2%")
    } else {
        format!("{}/{cells} cells outside 2%: {}", misses.len(), misses.join("; "))
    };
    verdict(misses.is_empty(), detail)
}

// ------------------------------------------------------------ criterion 2

fn criterion_2() -> Verdict {
    let sdm = ConstraintSpec::new("sdm", "sdm", Direction::AtMost { limit: -6700.0 });
    let life = ConstraintSpec::new("lifetime", "lifetime", Direction::Range { lo: 6.0, hi: 10.40 });
    let a = sdm.weight * phi(&sdm, -4830.0).unwrap();
    let b = life.weight * phi(&life, 4.97).unwrap();
    // the hand value ((x - c) / c)^2 * gamma
    let hand = 10_000.0 * ((-4830.0f64 + 6700.0) / -6700.0).powi(2);
    let ok_a = (a - 778.971).abs() <= 1e-3;
    let ok_b = (b - 294.694).abs() <= 1e-3;
    verdict(
        ok_a && ok_b,
        format!(
            "SDM term {a:.6} (target 778.971, |d| {:.4}; direct arithmetic {hand:.6}), lifetime term {b:.6} (target 294.694, |d| {:.2e})",
            (a - 778.971).abs(),
            (b - 294.694).abs()
        ),
    )
}

// ------------------------------------------------------------ criterion 3

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<ObjectivePoint> {
    let grid = rng.gen_bool(0.5);
    (0..n)
        .map(|i| {
            let mut o = vec![rng.gen::<f64>(), rng.gen::<f64>()];
            if grid {
                o.iter_mut().for_each(|v| *v = (*v * 8.0).floor());
            }
            if rng.gen_bool(0.2) {
                ObjectivePoint::infeasible(o, rng.gen_range(1..5) as f64, i as u64)
            } else {
                ObjectivePoint::feasible(o, i as u64)
            }
        })
        .collect()
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = Vec::new();
    for set in 0..200 {
        let n = rng.gen_range(1..=100);
        let pts = random_points(&mut rng, n);
        let fronts = nondominated_sort(&pts);
        if fronts != oracles::fronts(&pts) {
            bad.push(format!("set {set}: sort"));
        }
        for f in fronts.iter() {
            let objs: Vec<Vec<f64>> = f.iter().map(|&i| pts[i].objectives.clone()).collect();
            let refs: Vec<&[f64]> = objs.iter().map(|o| o.as_slice()).collect();
            if crowding_distance(&refs) != oracles::crowding(&objs) {
                bad.push(format!("set {set}: crowding"));
            }
        }
        let metric = if set % 2 == 0 { DistanceMetric::Niching } else { DistanceMetric::Crowding };
        // capacity above the set size: nothing is evicted, so the final
        // state is the scratch ranking of every point
        let mut buffer = ParetoBuffer::new(128, metric, 2);
        let dirs = buffer.directions().to_vec();
        let mut oracle = oracles::Buffer::new(128, metric, dirs.clone());
        let mut last = 0;
        for (k, p) in pts.iter().enumerate() {
            last = buffer.insert(p.clone()).rank;
            if n <= 40 {
                let want = oracle.insert(p.clone());
                if last != want {
                    bad.push(format!("set {set}: insertion {k} rank {last} vs {want}"));
                    break;
                }
            }
        }
        let seq: Vec<u64> = (0..n as u64).collect();
        let order = oracles::rank_order(&pts, &seq, metric, &dirs);
        let want_last = order.iter().position(|&i| i == n - 1).unwrap() + 1;
        let got: Vec<u64> = buffer.entries().iter().map(|e| e.point.id).collect();
        let want: Vec<u64> = order.iter().map(|&i| pts[i].id).collect();
        if got != want || last != want_last {
            bad.push(format!("set {set}: buffer order"));
        }
    }
    verdict(
        bad.is_empty(),
        if bad.is_empty() {
            "200 sets: sort, crowding and buffer ranks equal the brute-force oracles".into()
        } else {
            format!("{} mismatches: {}", bad.len(), bad.join(", "))
        },
    )
}

// ------------------------------------------------------------ criterion 4

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut problems = Vec::new();
    let mut inserted = 0;
    for metric in [DistanceMetric::Niching, DistanceMetric::Crowding] {
        let mut buffer = ParetoBuffer::new(64, metric, 2);
        let mut oracle = oracles::Buffer::new(64, metric, buffer.directions().to_vec());
        for i in 0..5_000u64 {
            let o = vec![(rng.gen::<f64>() * 50.0).round() / 50.0, (rng.gen::<f64>() * 50.0).round() / 50.0];
            let p = if rng.gen_bool(0.25) {
                ObjectivePoint::infeasible(o, rng.gen_range(1..20) as f64, i)
            } else {
                ObjectivePoint::feasible(o, i)
            };
            let ins = buffer.insert(p.clone());
            let want = oracle.insert(p);
            inserted += 1;
            if buffer.len() > 64 {
                problems.push(format!("{metric:?} step {i}: {} entries", buffer.len()));
            }
            let e = buffer.entries();
            if e.windows(2).any(|w| !w[0].point.feasible && w[1].point.feasible) {
                problems.push(format!("{metric:?} step {i}: infeasible ranked above feasible"));
            }
            if ins.reward() != -(want as f64) {
                problems.push(format!("{metric:?} step {i}: reward {} vs -{want}", ins.reward()));
            }
            if problems.len() > 5 {
                break;
            }
        }
    }
    verdict(
        problems.is_empty(),
        if problems.is_empty() {
            format!("{inserted} insertions at capacity 64 (niching and crowding): invariants hold")
        } else {
            problems.join("; ")
        },
    )
}

// ------------------------------------------------------------ criterion 5

fn criterion_5() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for r in [0.0, 0.06, 0.2] {
        let e = EconParams {
            discount_rate: r,
            ..EconParams::default()
        };
        let mut s = CashFlowSchedule::zeros(e.plant_life);
        for y in &mut s.years {
            y.om = 777.25;
        }
        let v = lcoe(&s, &e).unwrap();
        let err = rel(v, 777.25 / e.annual_energy);
        ok &= err <= 1e-12;
        notes.push(format!("annuity r={r}: {err:.1e}"));
    }
    let e = EconParams {
        discount_rate: 0.06,
        plant_life: 2,
        replacement_period: 10.0,
        annual_energy: 10.0,
    };
    let mut s = CashFlowSchedule::zeros(2);
    s.years[0].capital = 100.0;
    s.years[1].om = 50.0;
    s.years[2].om = 50.0;
    let hand = lcoe(&s, &e).unwrap();
    ok &= (hand - 6.7647).abs() <= 1e-4;
    notes.push(format!("3-year case {hand:.6}"));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let u: [f64; DIM] = std::array::from_fn(|_| rng.gen());
        let d = DesignVector::from_unit_cube(&u).unwrap();
        let q = QoIVector {
            lifetime: rng.gen_range(3.0..15.0),
            uranium_mass: rng.gen_range(300.0..800.0),
            ..QoIVector::default()
        };
        let alpha = rng.gen_range(0.01..100.0);
        let base = CostScenario::presets()[rng.gen_range(0..3)].clone();
        let e = EconParams::default();
        let a = lcoe(&build_cash_flows(&d, &q, &base, &e).unwrap(), &e).unwrap();
        let scaled = CostScenario {
            axial_reflector_price: alpha * base.axial_reflector_price,
            drum_reflector_price: alpha * base.drum_reflector_price,
            absorber_price: alpha * base.absorber_price,
            fuel_price: alpha * base.fuel_price,
            fixed_capital: alpha * base.fixed_capital,
            annual_om: alpha * base.annual_om,
            ..base.clone()
        };
        let b = lcoe(&build_cash_flows(&d, &q, &scaled, &e).unwrap(), &e).unwrap();
        worst = worst.max(rel(b, alpha * a));
    }
    ok &= worst <= 1e-12;
    notes.push(format!("homogeneity worst {worst:.1e}"));
    verdict(ok, notes.join(", "))
}

// ------------------------------------------------------------ criterion 6

fn criterion_6() -> Verdict {
    let exact = hypervolume_2d(&[[0.0, 1.0], [1.0, 0.0]], [2.0, 2.0]).unwrap();
    let mut ok = exact == 3.0;
    let mut notes = vec![format!("staircase {exact}")];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..4 {
        let mut xs: Vec<f64> = (0..15).map(|_| rng.gen()).collect();
        let mut ys: Vec<f64> = (0..15).map(|_| rng.gen()).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(|a, b| b.total_cmp(a));
        let front: Vec<[f64; 2]> = xs.iter().zip(&ys).map(|(x, y)| [*x, *y]).collect();
        let reference = [1.2, 1.3];
        let hv = hypervolume_2d(&front, reference).unwrap();
        let (est, se) = oracles::hypervolume_mc(&front, reference, [0.0, 0.0], 10_000_000, &mut rng);
        let z = (hv - est).abs() / se;
        ok &= z <= 3.0;
        notes.push(format!("front {trial}: {:.1} sigma", z));
    }
    verdict(ok, notes.join(", "))
}

// ------------------------------------------------------------ criterion 7

fn criterion_7() -> Verdict {
    let c = LossCoefficients {
        clip_range: 0.2,
        value_coeff: 0.5,
        entropy_coeff: 0.0001,
    };
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for seed in 100..105 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let old = Policy::new(DIM, 64, &mut rng);
        let mut p = old.clone();
        for t in p.theta.iter_mut() {
            *t += rng.gen_range(-0.03..0.03);
        }
        for s in p.log_std_mut() {
            *s = rng.gen_range(-1.0..0.5);
        }
        let rollout: Vec<Transition> = (0..8)
            .map(|_| {
                let a = sample_action(&old, &mut rng);
                Transition {
                    z: a.z,
                    log_prob: a.log_prob,
                    reward: rng.gen_range(-65.0..-1.0),
                    value: a.value,
                }
            })
            .collect();
        let batch = Batch::from_rollout(&rollout);
        let (_, grad) = loss_and_grad(&p, &p.theta, &batch, &c);
        let mut theta = p.theta.clone();
        for i in 0..theta.len() {
            let t0 = theta[i];
            theta[i] = t0 + h;
            let up = loss(&p, &theta, &batch, &c).total;
            theta[i] = t0 - h;
            let down = loss(&p, &theta, &batch, &c).total;
            theta[i] = t0;
            let fd = (up - down) / (2.0 * h);
            worst = worst.max((grad[i] - fd).abs() / grad[i].abs().max(fd.abs()).max(1e-6));
        }
    }
    verdict(worst < 1e-4, format!("5 states, max relative error {worst:.2e}"))
}

// -------------------------------------------------------- criteria 8 and 9

struct Trial {
    front_ok: bool,
    pearl_hv: f64,
    random_hv: f64,
    min_f_dh_x_ca: Option<f64>,
    conflicting: bool,
    front_size: usize,
}

fn random_search_front(env: &HpmrEnv, n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feasible = Vec::new();
    for _ in 0..n {
        let u: Vec<f64> = (0..DIM).map(|_| rng.gen()).collect();
        let o = env.evaluate(&u).unwrap();
        if o.feasible {
            feasible.push([o.objectives[0], o.objectives[1]]);
        }
    }
    nondominated_indices(&feasible).into_iter().map(|i| feasible[i]).collect()
}

fn run_trial(env: &HpmrEnv, trial: u64) -> Trial {
    let config = PearlConfig {
        agents: 8,
        total_steps: 8_000,
        seed: 1_000 * trial,
        ..PearlConfig::default()
    };
    let run = run_pearl(env, &config, Limits::default()).unwrap();
    let limit = 1.47 + 1e-9;
    let mut front_ok = !run.merged.is_empty() && run.failures.is_empty();
    for p in &run.merged {
        let d = DesignVector::from_slice(&p.design).unwrap();
        let check = env.evaluate_design(&d).unwrap();
        front_ok &= p.feasible && check.report.feasible && p.objectives[1] <= limit && check.qoi.f_dh <= limit;
    }
    let pearl: Vec<[f64; 2]> = run.merged.iter().map(|p| p.objectives).collect();
    let random = random_search_front(env, 8_000, 7_000 + trial);
    let reference = default_reference(pearl.iter().chain(random.iter())).unwrap_or([0.0; 2]);
    let hv = |f: &[[f64; 2]]| if f.is_empty() { 0.0 } else { hypervolume_2d(f, reference).unwrap() };

    let filtered: Vec<usize> = nondominated_indices(&pearl);
    let min_f_dh = run
        .merged
        .iter()
        .min_by(|a, b| a.objectives[1].total_cmp(&b.objectives[1]))
        .map(|p| p.design[0]);
    let sorted: Vec<[f64; 2]> = filtered.iter().map(|&i| pearl[i]).collect();
    let conflicting = sorted.len() >= 2 && sorted.windows(2).all(|w| w[0][0] < w[1][0] && w[0][1] > w[1][1]);
    Trial {
        front_ok,
        pearl_hv: hv(&pearl),
        random_hv: hv(&random),
        min_f_dh_x_ca: min_f_dh,
        conflicting,
        front_size: run.merged.len(),
    }
}

fn criteria_8_9() -> (Verdict, Verdict) {
    let env = HpmrEnv::new(CostScenario::scenario_3());
    let x_ca_limit = 35.0 + 0.1 * (180.0 - 35.0);
    let trials: Vec<Trial> = (0..10).map(|t| run_trial(&env, t)).collect();
    let wins: Vec<bool> = trials.iter().map(|t| t.front_ok && t.pearl_hv >= t.random_hv).collect();
    let trend: Vec<bool> = trials
        .iter()
        .map(|t| t.conflicting && t.min_f_dh_x_ca.is_some_and(|x| x <= x_ca_limit))
        .collect();
    let n8 = wins.iter().filter(|w| **w).count();
    let n9 = trend.iter().filter(|w| **w).count();
    let d8: Vec<String> = trials
        .iter()
        .map(|t| format!("{}/{:.1}/{:.1}", t.front_size, t.pearl_hv, t.random_hv))
        .collect();
    let d9: Vec<String> = trials
        .iter()
        .map(|t| {
            format!(
                "{:.1}{}",
                t.min_f_dh_x_ca.unwrap_or(f64::NAN),
                if t.conflicting { "" } else { "(not conflicting)" }
            )
        })
        .collect();
    (
        verdict(
            n8 >= 9,
            format!("{n8}/10 trials won (front size/PEARL HV/random HV: {})", d8.join(", ")),
        ),
        verdict(
            n9 >= 9,
            format!(
                "{n9}/10 trials with min-F_dh x_ca <= {x_ca_limit} and a conflicting front (x_ca: {})",
                d9.join(", ")
            ),
        ),
    )
}

// ----------------------------------------------------------- criterion 10

fn hpmr(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hpmr"))
        .args(args)
        .env_remove("HPMR_OUT")
        .env_remove("HPMR_SCENARIO_DIR")
        .output()
        .expect("run hpmr")
}

fn csv_files(dir: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(dir.join("manifest.json")).unwrap();
    let m: hpmr::Manifest = serde_json::from_str(&text).unwrap();
    m.files.into_iter().filter(|f| f.ends_with(".csv")).collect()
}

fn criterion_10() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    let runs: [(&str, Vec<&str>); 2] = [
        ("pearl", vec!["--agents", "4", "--steps", "2000", "--seed", "11"]),
        ("nsga2", vec!["--optimizer", "nsga2", "--steps", "1280", "--seed", "11"]),
    ];
    for (name, flags) in runs {
        let a = tmp.path().join(format!("{name}-a"));
        let b = tmp.path().join(format!("{name}-b"));
        let mut args = vec!["optimize", "--scenario", "scenario-2", "--out", a.to_str().unwrap()];
        args.extend(flags);
        let first = hpmr(&args);
        let manifest = a.join("manifest.json");
        let second = hpmr(&["optimize", "--manifest", manifest.to_str().unwrap(), "--out", b.to_str().unwrap()]);
        if !first.status.success() || !second.status.success() {
            ok = false;
            notes.push(format!("{name}: exit {:?}/{:?}", first.status.code(), second.status.code()));
            continue;
        }
        let files = csv_files(&a);
        let same = files
            .iter()
            .all(|f| std::fs::read(a.join(f)).ok() == std::fs::read(b.join(f)).ok());
        ok &= same && files.iter().any(|f| f == "front.csv");
        notes.push(format!(
            "{name}: {} exports {}",
            files.len(),
            if same { "byte-identical" } else { "DIFFER" }
        ));
    }
    verdict(ok, notes.join(", "))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, v: Verdict, t: Instant| {
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}: {tag} ({:.1} s) {}", t.elapsed().as_secs_f64(), v.detail);
        if !v.pass {
            failed += 1;
        }
    };
    let single: [(usize, fn() -> Verdict); 7] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
    ];
    for (n, f) in single {
        let t = Instant::now();
        report(n, f(), t);
    }
    let t = Instant::now();
    let (v8, v9) = criteria_8_9();
    report(8, v8, t);
    report(9, v9, t);
    let t = Instant::now();
    report(10, criterion_10(), t);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
