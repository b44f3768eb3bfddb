//! Experiment configuration: parsing, defaults and validation.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use credal::dependence::{Joint, SequenceModel, TestFunction};
use credal::expectation::ScalarFn;
use credal::serial::ModelSpec;
use credal::simulate::{AdversaryStrategy, Phi};
use credal::slln::{ScheduleSpec, WeightSchedule, DEFAULT_EPSILON};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Validation {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Axioms,
    Chain,
    Inequalities,
    Na,
    Vertical,
    Forward,
    Truncation,
    Slln,
    Strassen,
}

/// Subcommand groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Verify,
    Dependence,
    Simulate,
    All,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Axioms,
        CheckKind::Chain,
        CheckKind::Inequalities,
        CheckKind::Na,
        CheckKind::Vertical,
        CheckKind::Forward,
        CheckKind::Truncation,
        CheckKind::Slln,
        CheckKind::Strassen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Axioms => "axioms",
            CheckKind::Chain => "chain",
            CheckKind::Inequalities => "inequalities",
            CheckKind::Na => "na",
            CheckKind::Vertical => "vertical",
            CheckKind::Forward => "forward",
            CheckKind::Truncation => "truncation",
            CheckKind::Slln => "slln",
            CheckKind::Strassen => "strassen",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn in_group(self, group: Group) -> bool {
        match group {
            Group::All => true,
            Group::Verify => matches!(
                self,
                CheckKind::Axioms
                    | CheckKind::Chain
                    | CheckKind::Inequalities
                    | CheckKind::Truncation
            ),
            Group::Dependence => matches!(
                self,
                CheckKind::Na | CheckKind::Vertical | CheckKind::Forward
            ),
            Group::Simulate => matches!(self, CheckKind::Slln | CheckKind::Strassen),
        }
    }

    fn needs_simulation(self) -> bool {
        matches!(self, CheckKind::Slln | CheckKind::Strassen)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRequest {
    pub kind: CheckKind,
    /// The run passes iff this check fails.
    pub expected_violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InequalityParams {
    #[serde(default = "two")]
    pub p: f64,
    #[serde(default = "two")]
    pub q: f64,
    #[serde(default = "unit")]
    pub threshold: f64,
    #[serde(default = "square")]
    pub f: ScalarFn,
}

fn two() -> f64 {
    2.0
}

fn unit() -> f64 {
    1.0
}

fn square() -> ScalarFn {
    ScalarFn::Power { exponent: 2.0 }
}

impl Default for InequalityParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: 2.0,
            threshold: 1.0,
            f: square(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependenceParams {
    /// Horizon; defaults to 2.
    #[serde(default)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardParams {
    /// Variable names in coordinate order; defaults to the model's order.
    #[serde(default)]
    pub order: Option<Vec<String>>,
    /// Applied to every past coordinate, multiplied.
    #[serde(default)]
    pub g: Option<TestFunction<f64>>,
    /// Applied to the last coordinate.
    #[serde(default)]
    pub f: Option<TestFunction<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSection {
    #[serde(default = "ten")]
    pub coordinates: usize,
}

fn ten() -> usize {
    10
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self { coordinates: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    #[serde(default)]
    model: Option<Value>,
    #[serde(rename = "N", default = "default_horizon")]
    horizon: usize,
    #[serde(default = "default_paths")]
    paths: usize,
    #[serde(default = "default_strategies")]
    strategies: Vec<AdversaryStrategy>,
    #[serde(default)]
    n0: Option<usize>,
    #[serde(default = "default_epsilon")]
    epsilon: f64,
    #[serde(default = "default_phis")]
    phis: Vec<Phi>,
    #[serde(default)]
    max_upper_exceedance: f64,
    #[serde(default)]
    max_lower_undershoot: f64,
    #[serde(default = "default_control")]
    min_control_exceedance: f64,
    #[serde(default = "default_grid")]
    grid_per_decade: usize,
}

fn default_horizon() -> usize {
    100_000
}

fn default_paths() -> usize {
    200
}

fn default_strategies() -> Vec<AdversaryStrategy> {
    vec![
        AdversaryStrategy::Fixed { index: 0 },
        AdversaryStrategy::Cyclic,
        AdversaryStrategy::IidRandom { seed: 1 },
        AdversaryStrategy::DriftMax,
    ]
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_phis() -> Vec<Phi> {
    vec![Phi::Identity, Phi::Exp { rate: 1.0 }]
}

fn default_control() -> f64 {
    0.95
}

fn default_grid() -> usize {
    10
}

/// Validated simulation parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationParams {
    #[serde(rename = "N")]
    pub horizon: usize,
    pub paths: usize,
    pub strategies: Vec<AdversaryStrategy>,
    pub n0: usize,
    pub epsilon: f64,
    pub phis: Vec<Phi>,
    pub max_upper_exceedance: f64,
    pub max_lower_undershoot: f64,
    /// Minimum swapped-center exceedance over drift-max paths.
    pub min_control_exceedance: f64,
    pub grid_per_decade: usize,
}

#[derive(Debug, Clone)]
pub struct Schedule {
    pub label: String,
    pub spec: ScheduleSpec,
    pub schedule: WeightSchedule,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model: SequenceModel<f64>,
    pub model_spec: ModelSpec,
    /// Rectangular model sampled by simulations.
    pub simulation_model: Option<SequenceModel<f64>>,
    pub schedules: Vec<Schedule>,
    pub checks: Vec<CheckRequest>,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub inequalities: InequalityParams,
    pub dependence: DependenceParams,
    pub forward: ForwardParams,
    pub truncation: TruncationSection,
    pub simulation: Option<SimulationParams>,
    pub output: Option<PathBuf>,
}

/// Command-line values that take precedence over the document.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

const KNOWN_FIELDS: [&str; 12] = [
    "model",
    "schedule",
    "schedules",
    "checks",
    "tolerance",
    "seed",
    "inequalities",
    "dependence",
    "forward",
    "truncation",
    "simulation",
    "output",
];

pub fn load_config(path: &Path, overrides: Overrides) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, base, overrides)
}

/// Parses a JSON document. Relative paths resolve against `base`.
pub fn parse_config(
    text: &str,
    base: &Path,
    overrides: Overrides,
) -> Result<ExperimentConfig, ConfigError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(obj) = doc else {
        return Err(invalid("$", "expected a JSON object"));
    };
    if let Some(k) = obj.keys().find(|k| !KNOWN_FIELDS.contains(&k.as_str())) {
        return Err(invalid(k.clone(), "unknown field"));
    }

    let model_value = obj
        .get("model")
        .ok_or_else(|| invalid("model", "missing"))?;
    let (model_spec, model) = parse_model(model_value, base, "model")?;

    let checks = parse_checks(obj.get("checks"))?;
    let kinds: BTreeSet<CheckKind> = checks.iter().map(|c| c.kind).collect();

    let tolerance = match overrides.tolerance {
        Some(t) => t,
        None => optional::<f64>(&obj, "tolerance")?.unwrap_or(DEFAULT_TOLERANCE),
    };
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(invalid("tolerance", "must be a finite nonnegative number"));
    }
    let seed = overrides.seed.or(optional::<u64>(&obj, "seed")?);

    let schedules = parse_schedules(&obj)?;
    let inequalities = optional::<InequalityParams>(&obj, "inequalities")?.unwrap_or_default();
    let dependence = optional::<DependenceParams>(&obj, "dependence")?.unwrap_or_default();
    let forward = optional::<ForwardParams>(&obj, "forward")?.unwrap_or_default();
    let truncation = optional::<TruncationSection>(&obj, "truncation")?.unwrap_or_default();
    let output = optional::<PathBuf>(&obj, "output")?.map(|p| base.join(p));

    if let Some(order) = &forward.order {
        if order.len() != model.len() || order.iter().any(|n| !model.names().contains(n)) {
            return Err(invalid(
                "forward.order",
                "must list every model variable once",
            ));
        }
    }
    if (kinds.contains(&CheckKind::Truncation) || kinds.iter().any(|k| k.needs_simulation()))
        && schedules.is_empty()
    {
        return Err(invalid(
            "schedule",
            "required by the truncation, slln and strassen checks",
        ));
    }

    let needs_sim = kinds.iter().any(|k| k.needs_simulation());
    let mut simulation = None;
    let mut simulation_model = None;
    if needs_sim {
        if seed.is_none() {
            return Err(invalid("seed", "required when a simulation is requested"));
        }
        let raw = optional::<RawSimulation>(&obj, "simulation")?.unwrap_or_else(|| {
            serde_json::from_value(Value::Object(Map::new())).expect("all defaults")
        });
        let sim_model = match &raw.model {
            Some(v) => parse_model(v, base, "simulation.model")?.1,
            None => model.clone(),
        };
        if sim_model.joint() != Joint::Rectangular {
            return Err(invalid(
                "simulation.model",
                "simulations need a rectangular model",
            ));
        }
        simulation = Some(validate_simulation(raw)?);
        simulation_model = Some(sim_model);
    }

    Ok(ExperimentConfig {
        model,
        model_spec,
        simulation_model,
        schedules,
        checks,
        tolerance,
        seed,
        inequalities,
        dependence,
        forward,
        truncation,
        simulation,
        output,
    })
}

fn optional<T: DeserializeOwned>(
    obj: &Map<String, Value>,
    field: &str,
) -> Result<Option<T>, ConfigError> {
    obj.get(field)
        .map(|v| serde_json::from_value(v.clone()).map_err(|e| invalid(field, e)))
        .transpose()
}

fn parse_model(
    value: &Value,
    base: &Path,
    field: &str,
) -> Result<(ModelSpec, SequenceModel<f64>), ConfigError> {
    let value = match value {
        Value::String(rel) => {
            let path = base.join(rel);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| invalid(field, format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| invalid(field, format!("{}: {e}", path.display())))?
        }
        v => v.clone(),
    };
    let spec: ModelSpec = serde_json::from_value(value).map_err(|e| invalid(field, e))?;
    let model = spec.build().map_err(|e| invalid(field, e))?;
    Ok((spec, model))
}

fn parse_checks(value: Option<&Value>) -> Result<Vec<CheckRequest>, ConfigError> {
    let Some(value) = value else {
        return Err(invalid("checks", "missing"));
    };
    let Value::Array(items) = value else {
        return Err(invalid("checks", "expected a list"));
    };
    if items.is_empty() {
        return Err(invalid("checks", "empty"));
    }
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let field = format!("checks[{i}]");
        let (name, expected_violation) = match item {
            Value::String(s) => (s.as_str(), false),
            Value::Object(o) => {
                if let Some(k) = o
                    .keys()
                    .find(|k| *k != "check" && *k != "expected_violation")
                {
                    return Err(invalid(format!("{field}.{k}"), "unknown field"));
                }
                let name = o
                    .get("check")
                    .and_then(Value::as_str)
                    .ok_or_else(|| invalid(&field, "missing check name"))?;
                let ev = match o.get("expected_violation") {
                    None => false,
                    Some(Value::Bool(b)) => *b,
                    Some(_) => {
                        return Err(invalid(
                            format!("{field}.expected_violation"),
                            "expected a boolean",
                        ))
                    }
                };
                (name, ev)
            }
            _ => return Err(invalid(&field, "expected a check name or object")),
        };
        let kind = CheckKind::from_name(name)
            .ok_or_else(|| invalid(&field, format!("unknown check {name:?}")))?;
        if out.iter().any(|c: &CheckRequest| c.kind == kind) {
            return Err(invalid(&field, format!("duplicate check {name:?}")));
        }
        out.push(CheckRequest {
            kind,
            expected_violation,
        });
    }
    Ok(out)
}

fn schedule_label(spec: &ScheduleSpec) -> String {
    match spec.p {
        Some(p) if spec.kind == "mz" => format!("mz(p={p},beta={})", spec.beta),
        _ => format!("{}(beta={})", spec.kind, spec.beta),
    }
}

fn parse_schedules(obj: &Map<String, Value>) -> Result<Vec<Schedule>, ConfigError> {
    let (field, specs) = match (obj.get("schedule"), obj.get("schedules")) {
        (Some(_), Some(_)) => {
            return Err(invalid("schedules", "give either schedule or schedules"))
        }
        (Some(_), None) => (
            "schedule",
            vec![optional::<ScheduleSpec>(obj, "schedule")?.expect("present")],
        ),
        (None, Some(_)) => (
            "schedules",
            optional::<Vec<ScheduleSpec>>(obj, "schedules")?.expect("present"),
        ),
        (None, None) => return Ok(Vec::new()),
    };
    specs
        .into_iter()
        .enumerate()
        .map(|(i, spec)| {
            let f = if field == "schedule" {
                field.to_string()
            } else {
                format!("schedules[{i}]")
            };
            let schedule = spec.build().map_err(|e| invalid(f, e))?;
            Ok(Schedule {
                label: schedule_label(&spec),
                spec,
                schedule,
            })
        })
        .collect()
}

fn validate_simulation(raw: RawSimulation) -> Result<SimulationParams, ConfigError> {
    if raw.horizon < 1000 {
        return Err(invalid("simulation.N", "must be at least 1000"));
    }
    if raw.paths == 0 {
        return Err(invalid("simulation.paths", "must be positive"));
    }
    if raw.strategies.is_empty() {
        return Err(invalid("simulation.strategies", "empty"));
    }
    if !raw.strategies.contains(&AdversaryStrategy::DriftMax) {
        return Err(invalid(
            "simulation.strategies",
            "the negative control needs drift-max",
        ));
    }
    if !(raw.epsilon > 0.0) {
        return Err(invalid("simulation.epsilon", "must be positive"));
    }
    let n0 = raw.n0.unwrap_or(raw.horizon / 10);
    if n0 < 100 || n0 >= raw.horizon {
        return Err(invalid("simulation.n0", "need 100 <= n0 < N"));
    }
    for (i, phi) in raw.phis.iter().enumerate() {
        phi.sup_nonpositive()
            .map_err(|e| invalid(format!("simulation.phis[{i}]"), e))?;
    }
    for (field, v) in [
        ("simulation.max_upper_exceedance", raw.max_upper_exceedance),
        ("simulation.max_lower_undershoot", raw.max_lower_undershoot),
        (
            "simulation.min_control_exceedance",
            raw.min_control_exceedance,
        ),
    ] {
        if !(0.0..=1.0).contains(&v) {
            return Err(invalid(field, "must lie in [0, 1]"));
        }
    }
    Ok(SimulationParams {
        horizon: raw.horizon,
        paths: raw.paths,
        strategies: raw.strategies,
        n0,
        epsilon: raw.epsilon,
        phis: raw.phis,
        max_upper_exceedance: raw.max_upper_exceedance,
        max_lower_undershoot: raw.max_lower_undershoot,
        min_control_exceedance: raw.min_control_exceedance,
        grid_per_decade: raw.grid_per_decade,
    })
}
