//! Scenario files and run configuration.
//!
//! Run settings are layered: built-in defaults, then an optional TOML file,
//! then command-line overrides applied by the caller.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hpmr_core::env::{Evaluator, HpmrEnv, Kernel, ProxyModelConfig, TabularModel};
use hpmr_core::nsga2::GaConfig;
use hpmr_core::pearl::PearlConfig;
use hpmr_core::{ConstraintSet, ConstraintSpec, CostScenario, EconParams};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formats;

/// Shipped presets: `(id, file contents)`.
pub const PRESETS: [(&str, &str); 3] = [
    ("scenario-1", include_str!("../scenarios/scenario-1.toml")),
    ("scenario-2", include_str!("../scenarios/scenario-2.toml")),
    ("scenario-3", include_str!("../scenarios/scenario-3.toml")),
];

/// Environment variable naming an extra directory of scenario files.
pub const SCENARIO_DIR_VAR: &str = "HPMR_SCENARIO_DIR";
/// Environment variable naming the default output root.
pub const OUT_VAR: &str = "HPMR_OUT";

/// Contents of one scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub scenario: CostScenario,
    #[serde(default)]
    pub econ: EconParams,
    #[serde(default = "default_constraints")]
    pub constraints: Vec<ConstraintSpec>,
}

fn default_constraints() -> Vec<ConstraintSpec> {
    ConstraintSet::hpmr_default().constraints
}

impl ScenarioFile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let s: ScenarioFile = toml::from_str(text).map_err(|e| Error::parse(origin, e))?;
        s.check()?;
        Ok(s)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn check(&self) -> Result<()> {
        self.scenario.check()?;
        self.econ.check()?;
        ConstraintSet::new(self.constraints.clone())?;
        Ok(())
    }

    pub fn constraint_set(&self) -> Result<ConstraintSet> {
        Ok(ConstraintSet::new(self.constraints.clone())?)
    }
}

/// A scenario found by [`list_scenarios`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioEntry {
    pub id: String,
    /// `None` for built-in presets.
    pub path: Option<PathBuf>,
    pub file: ScenarioFile,
}

pub fn preset(id: &str) -> Option<ScenarioFile> {
    PRESETS
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(name, text)| ScenarioFile::parse(text, Path::new(name)).expect("shipped preset parses"))
}

/// Directory searched for user scenarios: the explicit one, else
/// `$HPMR_SCENARIO_DIR`.
pub fn scenario_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(SCENARIO_DIR_VAR).map(PathBuf::from))
}

/// Presets first, then `*.toml` files of `dir` sorted by file name.
pub fn list_scenarios(dir: Option<&Path>) -> Result<Vec<ScenarioEntry>> {
    let mut out: Vec<ScenarioEntry> = PRESETS
        .iter()
        .map(|(id, _)| ScenarioEntry {
            id: id.to_string(),
            path: None,
            file: preset(id).expect("preset"),
        })
        .collect();
    let Some(dir) = dir else { return Ok(out) };
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "toml") {
            paths.push(path);
        }
    }
    paths.sort();
    for path in paths {
        let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        out.push(ScenarioEntry {
            file: ScenarioFile::read(&path)?,
            id,
            path: Some(path),
        });
    }
    Ok(out)
}

/// Resolves a preset id, a scenario id in `dir`, or a file path.
pub fn resolve_scenario(reference: &str, dir: Option<&Path>) -> Result<ScenarioFile> {
    if let Some(s) = preset(reference) {
        return Ok(s);
    }
    if let Some(dir) = dir {
        let candidate = dir.join(format!("{reference}.toml"));
        if candidate.is_file() {
            return ScenarioFile::read(&candidate);
        }
    }
    let path = Path::new(reference);
    if path.is_file() {
        return ScenarioFile::read(path);
    }
    let known: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
    Err(Error::Config(format!(
        "unknown scenario `{reference}` (presets: {}; or give a file path)",
        known.join(", ")
    )))
}

/// Where the neutronics quantities come from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum EvaluatorSpec {
    #[default]
    Proxy,
    Tabular(PathBuf),
}

impl FromStr for EvaluatorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "proxy" {
            return Ok(EvaluatorSpec::Proxy);
        }
        match s.strip_prefix("tabular:") {
            Some(p) if !p.is_empty() => Ok(EvaluatorSpec::Tabular(PathBuf::from(p))),
            _ => Err(Error::Config(format!(
                "evaluator `{s}` is neither `proxy` nor `tabular:<path>`"
            ))),
        }
    }
}

impl fmt::Display for EvaluatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvaluatorSpec::Proxy => f.write_str("proxy"),
            EvaluatorSpec::Tabular(p) => write!(f, "tabular:{}", p.display()),
        }
    }
}

impl Serialize for EvaluatorSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EvaluatorSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    #[default]
    Pearl,
    Nsga2,
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimizerKind::Pearl => "pearl",
            OptimizerKind::Nsga2 => "nsga2",
        })
    }
}

/// Everything that determines a run. Output location and the wall-clock
/// guard are included for the record but do not affect results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Preset id, scenario id in the scenario directory, or file path.
    pub scenario: String,
    pub evaluator: EvaluatorSpec,
    /// Interpolation kernel of the tabular evaluator.
    pub kernel: Kernel,
    pub optimizer: OptimizerKind,
    pub out: Option<PathBuf>,
    pub max_seconds: Option<f64>,
    /// Write policy parameters every this many agent steps.
    pub checkpoint_interval: Option<usize>,
    pub pearl: PearlConfig,
    pub nsga2: GaConfig,
    pub proxy: ProxyModelConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: "scenario-3".into(),
            evaluator: EvaluatorSpec::Proxy,
            kernel: Kernel::default(),
            optimizer: OptimizerKind::Pearl,
            out: None,
            max_seconds: None,
            checkpoint_interval: None,
            pearl: PearlConfig::default(),
            nsga2: GaConfig::default().with_budget(PearlConfig::default().total_steps),
            proxy: ProxyModelConfig::default(),
        }
    }
}

/// Command-line overrides, applied last.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub scenario: Option<String>,
    pub evaluator: Option<EvaluatorSpec>,
    pub optimizer: Option<OptimizerKind>,
    pub agents: Option<usize>,
    /// Total evaluation budget of either optimizer.
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub max_seconds: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::parse(origin, e))
    }

    /// Defaults overlaid with `file` (TOML, or JSON by extension).
    pub fn load(file: Option<&Path>) -> Result<Self> {
        let Some(path) = file else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::parse(path, e))
        } else {
            Self::from_toml(&text, path)
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = &o.scenario {
            self.scenario = s.clone();
        }
        if let Some(e) = &o.evaluator {
            self.evaluator = e.clone();
        }
        if let Some(k) = o.optimizer {
            self.optimizer = k;
        }
        if let Some(a) = o.agents {
            self.pearl.agents = a;
        }
        if let Some(n) = o.steps {
            self.pearl.total_steps = n;
            self.nsga2 = self.nsga2.clone().with_budget(n);
        }
        if let Some(s) = o.seed {
            self.pearl.seed = s;
            self.pearl.seeds = None;
            self.nsga2.seed = s;
        }
        if let Some(p) = &o.out {
            self.out = Some(p.clone());
        }
        if let Some(m) = o.max_seconds {
            self.max_seconds = Some(m);
        }
    }

    pub fn check(&self) -> Result<()> {
        match self.optimizer {
            OptimizerKind::Pearl => self.pearl.check()?,
            OptimizerKind::Nsga2 => self.nsga2.check()?,
        }
        self.proxy.check()?;
        if let Some(m) = self.max_seconds {
            if !(m > 0.0) {
                return Err(Error::Config("max_seconds must be positive".into()));
            }
        }
        if self.checkpoint_interval == Some(0) {
            return Err(Error::Config("checkpoint_interval must be at least 1".into()));
        }
        if let EvaluatorSpec::Tabular(p) = &self.evaluator {
            if !p.is_file() {
                return Err(Error::Config(format!("sample table {} does not exist", p.display())));
            }
        }
        Ok(())
    }

    /// Seeds the run will use, one per agent (one for NSGA-II).
    pub fn seeds(&self) -> Vec<u64> {
        match self.optimizer {
            OptimizerKind::Pearl => (0..self.pearl.agents).map(|i| self.pearl.agent_seed(i)).collect(),
            OptimizerKind::Nsga2 => vec![self.nsga2.seed],
        }
    }

    /// Label used for output directories and reports.
    pub fn label(&self) -> String {
        let scenario = Path::new(&self.scenario)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.scenario.clone());
        let seed = match self.optimizer {
            OptimizerKind::Pearl => self.pearl.seed,
            OptimizerKind::Nsga2 => self.nsga2.seed,
        };
        format!("{scenario}-{}-seed{seed}", self.optimizer)
    }

    /// Explicit output directory, else `$HPMR_OUT/<label>`, else
    /// `runs/<label>`.
    pub fn output_dir(&self) -> PathBuf {
        if let Some(p) = &self.out {
            return p.clone();
        }
        let root = std::env::var_os(OUT_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("runs"));
        root.join(self.label())
    }

    pub fn evaluator(&self) -> Result<Evaluator> {
        match &self.evaluator {
            EvaluatorSpec::Proxy => Ok(Evaluator::Proxy(self.proxy)),
            EvaluatorSpec::Tabular(path) => {
                let table = formats::read_sample_table(path)?;
                Ok(Evaluator::Tabular {
                    model: TabularModel::new(&table, self.kernel)?,
                    constants: self.proxy,
                })
            }
        }
    }

    pub fn environment(&self, scenario: &ScenarioFile) -> Result<HpmrEnv> {
        Ok(HpmrEnv {
            scenario: scenario.scenario.clone(),
            econ: scenario.econ.clone(),
            constraints: scenario.constraint_set()?,
            evaluator: self.evaluator()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_core_presets() {
        for (id, _) in PRESETS {
            let file = preset(id).unwrap();
            assert_eq!(Some(file.scenario), CostScenario::preset(id));
            assert_eq!(file.econ, EconParams::default());
            assert_eq!(file.constraints, ConstraintSet::hpmr_default().constraints);
        }
    }

    #[test]
    fn evaluator_spec_round_trip() {
        for s in ["proxy", "tabular:data/x.csv"] {
            assert_eq!(s.parse::<EvaluatorSpec>().unwrap().to_string(), s);
        }
        assert!("tabular:".parse::<EvaluatorSpec>().is_err());
        assert!("openmc".parse::<EvaluatorSpec>().is_err());
    }

    #[test]
    fn layering_order() {
        let text = "scenario = \"scenario-1\"\n[pearl]\nagents = 4\ntotal_steps = 400\n";
        let mut c = RunConfig::from_toml(text, Path::new("x.toml")).unwrap();
        assert_eq!(c.pearl.agents, 4);
        assert_eq!(c.pearl.n_steps, PearlConfig::default().n_steps);
        c.apply(&Overrides {
            agents: Some(2),
            seed: Some(9),
            ..Overrides::default()
        });
        assert_eq!((c.scenario.as_str(), c.pearl.agents, c.pearl.total_steps), ("scenario-1", 2, 400));
        assert_eq!(c.seeds(), vec![9, 10]);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("agentz = 3\n", Path::new("x.toml")).is_err());
    }

    #[test]
    fn config_toml_round_trip() {
        let c = RunConfig::default();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_toml(&text, Path::new("x.toml")).unwrap(), c);
    }
}
