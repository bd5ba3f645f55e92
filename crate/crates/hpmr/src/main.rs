use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hpmr::config::{self, EvaluatorSpec, OptimizerKind, Overrides, RunConfig, ScenarioFile};
use hpmr::error::{exit, Error, Result};
use hpmr::formats;
use hpmr::runner::{self, Manifest};
use hpmr_core::design::{FIELD_NAMES, FIELD_UNITS};
use hpmr_core::econ::{cost_breakdown, CostBreakdown};
use hpmr_core::metrics::{default_reference, FrontReport};

#[derive(Parser)]
#[command(name = "hpmr", version, about = "Constrained LCOE / peaking-factor optimization of heat-pipe microreactor cores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one design record and print its quantities, constraints and costs.
    Evaluate(EvaluateArgs),
    /// Run PEARL or NSGA-II and write a run directory.
    Optimize(OptimizeArgs),
    /// List the available cost scenarios.
    Scenarios {
        /// Extra directory of scenario files.
        #[arg(long, env = config::SCENARIO_DIR_VAR)]
        scenario_dir: Option<PathBuf>,
    },
    /// Compare hypervolumes of run directories or front files.
    Report(ReportArgs),
}

#[derive(Args)]
struct EvaluateArgs {
    /// Design record (TOML key-value file).
    design: PathBuf,
    #[arg(long, default_value = "scenario-1")]
    scenario: String,
    #[arg(long, env = config::SCENARIO_DIR_VAR)]
    scenario_dir: Option<PathBuf>,
    /// `proxy` or `tabular:<sample table>`.
    #[arg(long)]
    evaluator: Option<EvaluatorSpec>,
    /// Run configuration supplying proxy constants and the kernel.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write the yearly cash flows to this CSV file.
    #[arg(long)]
    cash_flows: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Run configuration file (TOML, or JSON by extension).
    #[arg(long, conflicts_with = "manifest")]
    config: Option<PathBuf>,
    /// Replay the configuration recorded in a run manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long, env = config::SCENARIO_DIR_VAR)]
    scenario_dir: Option<PathBuf>,
    #[arg(long)]
    evaluator: Option<EvaluatorSpec>,
    #[arg(long, value_enum)]
    optimizer: Option<OptimizerKind>,
    #[arg(long)]
    agents: Option<usize>,
    /// Total evaluation budget.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; default `$HPMR_OUT/<label>` or `runs/<label>`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stop gracefully after this many seconds, keeping partial results.
    #[arg(long)]
    max_seconds: Option<f64>,
    /// Save policy parameters every this many agent steps.
    #[arg(long)]
    checkpoint_interval: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    /// Run directories or front CSV files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Common reference point `lcoe,f_dh`; default max + 10% over all fronts.
    #[arg(long, value_delimiter = ',')]
    reference: Option<Vec<f64>>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evaluate(a) => evaluate(a),
        Command::Optimize(a) => optimize(a),
        Command::Scenarios { scenario_dir } => scenarios(scenario_dir.as_deref()),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn absolute_evaluator(spec: EvaluatorSpec) -> EvaluatorSpec {
    match spec {
        EvaluatorSpec::Tabular(p) => EvaluatorSpec::Tabular(std::fs::canonicalize(&p).unwrap_or(p)),
        other => other,
    }
}

fn evaluate(a: EvaluateArgs) -> Result<u8> {
    let mut cfg = RunConfig::load(a.config.as_deref())?;
    if let Some(e) = a.evaluator {
        cfg.evaluator = e;
    }
    let scenario = config::resolve_scenario(&a.scenario, config::scenario_dir(a.scenario_dir.as_deref()).as_deref())?;
    let design = formats::read_design(&a.design)?;
    let env = cfg.environment(&scenario)?;
    if let Err(violations) = design.validate() {
        eprintln!("error: {} is outside the design space:", a.design.display());
        for v in &violations {
            eprintln!("  {v}");
        }
        return Ok(exit::EVALUATION);
    }
    let e = env.evaluate_design(&design)?;
    let breakdown = cost_breakdown(&e.schedule, &env.econ);
    if let Some(path) = &a.cash_flows {
        formats::write_text(path, &formats::cash_flows_to_csv(&e.schedule, &env.econ))?;
    }
    if a.json {
        let doc = serde_json::json!({
            "design": design,
            "scenario": scenario.scenario.name,
            "evaluator": cfg.evaluator.to_string(),
            "qoi": e.qoi,
            "constraints": e.report,
            "lcoe_breakdown": breakdown,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print_evaluation(&design, &scenario, &cfg.evaluator, &e, &breakdown);
    }
    Ok(if e.report.feasible { exit::OK } else { exit::INFEASIBLE })
}

fn print_evaluation(
    design: &hpmr_core::DesignVector,
    scenario: &ScenarioFile,
    evaluator: &EvaluatorSpec,
    e: &hpmr_core::env::Evaluation,
    breakdown: &CostBreakdown,
) {
    println!("scenario  {} ({})", scenario.scenario.name, scenario.scenario.description);
    println!("evaluator {evaluator}");
    println!("\ndesign");
    for ((name, unit), v) in FIELD_NAMES.iter().zip(FIELD_UNITS).zip(design.to_array()) {
        println!("  {name:<6} {v:>12} {unit}");
    }
    let q = &e.qoi;
    println!("\nquantities");
    let rows = [
        ("lifetime", q.lifetime, "years"),
        ("sdm", q.sdm, "pcm"),
        ("f_dh", q.f_dh, ""),
        ("q_max", q.q_max, ""),
        ("q_avg", q.q_avg, ""),
        ("uranium_mass", q.uranium_mass, "kg"),
        ("u235_mass", q.u235_mass, "kg"),
        ("burnup", q.burnup, "MWd/kgU"),
        ("power_density", q.power_density, ""),
        ("lcoe", q.lcoe, "$/MWh"),
    ];
    for (name, v, unit) in rows {
        println!("  {name:<14} {v:>14.6} {unit}");
    }
    if let Some(itc) = q.itc {
        println!("  {:<14} {itc:>14.6}", "itc");
    }
    if q.extrapolated {
        println!("  (tabular answer extrapolated outside the sample hull)");
    }
    println!("\nconstraints");
    println!("  {:<10} {:>14} {:>14} {:>14}  status", "name", "value", "phi", "weighted");
    for t in &e.report.terms {
        let status = if t.satisfied { "ok" } else { "VIOLATED" };
        println!("  {:<10} {:>14.6} {:>14.6e} {:>14.6}  {status}", t.name, t.value, t.phi, t.weighted);
    }
    println!("  penalty {}  feasible {}", e.report.penalty, if e.report.feasible { "yes" } else { "no" });
    println!("\nlcoe breakdown (discounted cost share)");
    for ((name, v), share) in CostBreakdown::CATEGORIES.iter().zip(breakdown.values()).zip(breakdown.shares()) {
        println!("  {name:<20} {v:>16.2} {:>7.2}%", 100.0 * share);
    }
}

fn optimize(a: OptimizeArgs) -> Result<u8> {
    let dir_hint = config::scenario_dir(a.scenario_dir.as_deref());
    let (mut cfg, recorded) = match &a.manifest {
        Some(m) => {
            let man = Manifest::read(m)?;
            (man.config, Some(man.scenario))
        }
        None => (RunConfig::load(a.config.as_deref())?, None),
    };
    let overrides = Overrides {
        scenario: a.scenario.clone(),
        evaluator: a.evaluator,
        optimizer: a.optimizer,
        agents: a.agents,
        steps: a.steps,
        seed: a.seed,
        out: a.out,
        max_seconds: a.max_seconds,
    };
    cfg.apply(&overrides);
    if a.checkpoint_interval.is_some() {
        cfg.checkpoint_interval = a.checkpoint_interval;
    }
    cfg.evaluator = absolute_evaluator(cfg.evaluator);
    let scenario = match recorded {
        Some(s) if a.scenario.is_none() => s,
        _ => config::resolve_scenario(&cfg.scenario, dir_hint.as_deref())?,
    };
    cfg.check()?;
    let dir = cfg.output_dir();
    let result = runner::execute(&cfg, &scenario)?;
    for f in &result.failures {
        eprintln!("agent {} (seed {}) failed: {}", f.agent, f.seed, f.message);
    }
    let manifest = runner::write_run(&dir, &cfg, &scenario, &result)?;
    let (front, _) = runner::build_report(&cfg, &scenario, &result)?;
    println!("run        {}", manifest.label);
    println!("status     {:?}", manifest.status);
    println!("evaluated  {} designs in {:.1} s", manifest.evaluations, manifest.elapsed_seconds);
    println!("front      {} feasible non-dominated designs", front.points.len());
    println!(
        "reference  ({}, {})  hypervolume {}",
        front.reference[0], front.reference[1], front.hypervolume
    );
    if let (Some(c), Some(s)) = (front.best(0), front.best(1)) {
        println!("min LCOE   {:.2} $/MWh at F_dh {:.4}", c.objectives[0], c.objectives[1]);
        println!("min F_dh   {:.4} at LCOE {:.2} $/MWh", s.objectives[1], s.objectives[0]);
    }
    if result.truncated {
        println!("stopped by the {} s wall-clock limit", cfg.max_seconds.unwrap_or(0.0));
    }
    println!("output     {}", dir.display());
    Ok(manifest.status.exit_code())
}

fn scenarios(dir: Option<&Path>) -> Result<u8> {
    let dir = config::scenario_dir(dir);
    let list = config::list_scenarios(dir.as_deref())?;
    println!(
        "{:<14} {:>12} {:>12} {:>12} {:>10}  description",
        "id", "axial $/kg", "drum $/kg", "B4C $/kg", "fuel $/kg"
    );
    for s in list {
        let c = &s.file.scenario;
        let origin = s.path.map(|p| format!(" [{}]", p.display())).unwrap_or_default();
        println!(
            "{:<14} {:>12} {:>12} {:>12} {:>10}  {}{origin}",
            s.id, c.axial_reflector_price, c.drum_reflector_price, c.absorber_price, c.fuel_price, c.description
        );
    }
    Ok(exit::OK)
}

fn report(a: ReportArgs) -> Result<u8> {
    let mut fronts = Vec::new();
    for input in &a.inputs {
        let path = if input.is_dir() { input.join("front.csv") } else { input.clone() };
        fronts.push(formats::read_front_report(&path)?);
    }
    let reference = match a.reference.as_deref() {
        Some(&[x, y]) => [x, y],
        Some(_) => return Err(Error::Config("--reference takes two values `lcoe,f_dh`".into())),
        None => default_reference(
            fronts
                .iter()
                .flat_map(|f| f.points.iter().filter(|p| p.feasible))
                .map(|p| &p.objectives),
        )
        .ok_or_else(|| Error::Config("no feasible point in any front".into()))?,
    };
    let rescored = fronts
        .into_iter()
        .map(|f| FrontReport::new(f.label, f.points, Some(reference)))
        .collect::<hpmr_core::Result<Vec<_>>>()?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&rescored).expect("serializable"));
        return Ok(exit::OK);
    }
    println!("reference ({}, {})", reference[0], reference[1]);
    println!("{:<40} {:>8} {:>16}", "front", "feasible", "hypervolume");
    for r in &rescored {
        println!("{:<40} {:>8} {:>16.6}", r.label, r.feasible_count, r.hypervolume);
    }
    Ok(exit::OK)
}
