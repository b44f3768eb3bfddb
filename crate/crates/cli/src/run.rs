//! Executes the checks of a configuration.

use credal::capacity::capacity_axiom_report;
use credal::dependence::{
    check_negative_association, check_vertical_independence, default_family,
    forward_factorization_value, Direction, SequenceModel, TestFunction,
};
use credal::expectation::{
    expectation_chain, inequality_suite, sublinear_axiom_report, InequalityInputs, OracleLimits,
    SublinearInputs,
};
use credal::report::{Check, Report};
use credal::simulate::{run_slln_experiment, Aggregate, ExperimentSpec, Phi, TrajectoryRow};
use credal::slln::{truncation_report, validate_schedule, ScheduleReport};
use credal::{Error, Event};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{CheckKind, CheckRequest, ExperimentConfig, Group, Schedule};

/// One line of `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub pass: bool,
    pub expected_violation: bool,
    /// `pass` unless a violation was expected, then `!pass`.
    pub ok: bool,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub schedule: String,
    pub validation: ScheduleReport,
    pub aggregates: Vec<Aggregate>,
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub entries: Vec<Entry>,
    pub experiments: Vec<ExperimentSummary>,
    /// `(schedule label, row)`
    pub trajectories: Vec<(String, TrajectoryRow)>,
}

impl Outcome {
    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn first_failure(&self) -> Option<&Entry> {
        self.entries.iter().find(|e| !e.ok)
    }

    fn push(&mut self, prefix: &str, req: &CheckRequest, c: Check) {
        let ok = c.pass != req.expected_violation;
        self.entries.push(Entry {
            check: if c.check.is_empty() {
                prefix.to_string()
            } else {
                format!("{prefix}/{}", c.check)
            },
            lhs: c.lhs,
            rhs: c.rhs,
            gap: c.gap,
            pass: c.pass,
            expected_violation: req.expected_violation,
            ok,
            witness: c.witness,
        });
    }

    fn push_report(&mut self, prefix: &str, req: &CheckRequest, r: Report) {
        for c in r.checks {
            self.push(prefix, req, c);
        }
    }
}

/// Runs the configured checks that belong to `group`, in configuration
/// order.
pub fn execute(config: &ExperimentConfig, group: Group) -> Result<Outcome, Error> {
    let mut out = Outcome::default();
    let mut experiments: Option<Vec<RunExperiment>> = None;
    for req in config.checks.iter().filter(|c| c.kind.in_group(group)) {
        match req.kind {
            CheckKind::Axioms => axioms(config, req, &mut out)?,
            CheckKind::Chain => chain(config, req, &mut out)?,
            CheckKind::Inequalities => inequalities(config, req, &mut out)?,
            CheckKind::Na => na(config, req, &mut out)?,
            CheckKind::Vertical => vertical(config, req, &mut out)?,
            CheckKind::Forward => forward(config, req, &mut out)?,
            CheckKind::Truncation => truncation(config, req, &mut out)?,
            CheckKind::Slln | CheckKind::Strassen => {
                if experiments.is_none() {
                    experiments = Some(run_experiments(config, &mut out)?);
                }
                let runs = experiments.as_ref().expect("just set");
                if req.kind == CheckKind::Slln {
                    slln(config, req, runs, &mut out);
                } else {
                    strassen(config, req, runs, &mut out);
                }
            }
        }
    }
    Ok(out)
}

fn axioms(config: &ExperimentConfig, req: &CheckRequest, out: &mut Outcome) -> Result<(), Error> {
    let credal = config.model.credal();
    let size = credal.size();
    let events: Vec<Event> = if size <= 12 {
        Event::all(size).collect()
    } else {
        (0..size)
            .flat_map(|i| {
                let e = Event::from_indices(size, [i]).expect("in range");
                [e.complement(), e]
            })
            .collect()
    };
    let mut report = capacity_axiom_report(credal, &events)?;
    let vars = config.model.variables();
    for (i, x) in vars.iter().enumerate() {
        let y = &vars[(i + 1) % vars.len()];
        let r = sublinear_axiom_report(
            credal,
            &SublinearInputs {
                x,
                y,
                lambda: 2.0,
                c: 1.0,
                a: -1.5,
            },
        )?;
        for c in r.checks {
            report.record(c);
        }
    }
    out.push_report("axioms", req, report);
    Ok(())
}

fn chain(config: &ExperimentConfig, req: &CheckRequest, out: &mut Outcome) -> Result<(), Error> {
    let credal = config.model.credal();
    for (name, x) in config.model.names().iter().zip(config.model.variables()) {
        let c = match expectation_chain(credal, x) {
            Ok(b) => Check::verdict(name.clone(), true, json!({ "values": b.as_array() }))
                .with_bounds(b.choquet_lower, b.choquet_upper),
            Err(Error::ChainViolation(msg)) => {
                Check::verdict(name.clone(), false, json!({ "violation": msg }))
            }
            Err(e) => return Err(e),
        };
        out.push("chain", req, c);
    }
    Ok(())
}

trait WithBounds {
    fn with_bounds(self, lhs: f64, rhs: f64) -> Self;
}

impl WithBounds for Check {
    fn with_bounds(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self.gap = rhs - lhs;
        self
    }
}

fn inequalities(
    config: &ExperimentConfig,
    req: &CheckRequest,
    out: &mut Outcome,
) -> Result<(), Error> {
    let p = &config.inequalities;
    let vars = config.model.variables();
    let mut report = Report::new();
    for (i, x) in vars.iter().enumerate() {
        let y = &vars[(i + 1) % vars.len()];
        let r = inequality_suite(
            config.model.credal(),
            &InequalityInputs {
                x,
                y,
                p: p.p,
                q: p.q,
                threshold: p.threshold,
                f: &p.f,
            },
        )?;
        for c in r.checks {
            report.record(c);
        }
    }
    out.push_report("inequalities", req, report);
    Ok(())
}

fn horizon(config: &ExperimentConfig) -> usize {
    config.dependence.n.unwrap_or(2)
}

fn na(config: &ExperimentConfig, req: &CheckRequest, out: &mut Outcome) -> Result<(), Error> {
    let family = default_family(&config.model, Direction::Increasing);
    let r = check_negative_association(
        &config.model,
        horizon(config),
        &family,
        &config.tolerance,
        OracleLimits::default(),
    )?;
    let w = r.witness.as_ref().expect("at least one tuple");
    let c = Check::at_most("", &w.lhs, &w.rhs, &config.tolerance).with_witness(r.to_json());
    out.push("na", req, c);
    Ok(())
}

fn vertical(config: &ExperimentConfig, req: &CheckRequest, out: &mut Outcome) -> Result<(), Error> {
    let family = default_family(&config.model, Direction::Increasing);
    let r = check_vertical_independence(
        &config.model,
        horizon(config),
        family.functions(),
        &config.tolerance,
        OracleLimits::default(),
    )?;
    let c = match &r.witness {
        Some(w) => Check::equal("", &w.lhs, &w.rhs, &config.tolerance),
        None => Check::verdict("", true, Value::Null),
    };
    out.push("vertical", req, c.with_witness(r.to_json()));
    Ok(())
}

fn default_ramp(model: &SequenceModel<f64>) -> TestFunction<f64> {
    let (lo, hi) = model.value_range();
    let w = if hi > lo { hi - lo } else { 1.0 };
    TestFunction::Ramp {
        threshold: lo,
        width: w,
        direction: Direction::Increasing,
    }
}

fn forward(config: &ExperimentConfig, req: &CheckRequest, out: &mut Outcome) -> Result<(), Error> {
    let model = match &config.forward.order {
        Some(order) => {
            let idx: Vec<usize> = order
                .iter()
                .map(|n| {
                    config
                        .model
                        .names()
                        .iter()
                        .position(|m| m == n)
                        .expect("validated")
                })
                .collect();
            config.model.reordered(&idx)?
        }
        None => config.model.clone(),
    };
    let n = match model.max_horizon() {
        Some(max) => max,
        None => horizon(config),
    };
    let g = config
        .forward
        .g
        .clone()
        .unwrap_or_else(|| default_ramp(&model));
    let f = config
        .forward
        .f
        .clone()
        .unwrap_or_else(|| default_ramp(&model));
    let value = forward_factorization_value(
        &model,
        n,
        |prefix: &[f64]| prefix.iter().map(|v| g.apply(v)).product(),
        &f,
        OracleLimits::default(),
    )?;
    let c = Check::at_least("", &value, &0.0, &config.tolerance).with_witness(json!({
        "order": model.names(),
        "n": n,
        "g": g,
        "f": f,
        "value": value,
    }));
    out.push("forward", req, c);
    Ok(())
}

fn truncation(
    config: &ExperimentConfig,
    req: &CheckRequest,
    out: &mut Outcome,
) -> Result<(), Error> {
    for s in &config.schedules {
        let mut report = Report::new();
        for i in 1..=config.truncation.coordinates {
            let r = truncation_report(
                &s.schedule,
                i,
                config.model.credal(),
                config.model.coordinate(i - 1),
            )?;
            for c in r.checks {
                report.record(c);
            }
        }
        out.push_report(&format!("truncation/{}", s.label), req, report);
    }
    Ok(())
}

struct RunExperiment {
    label: String,
    result: credal::simulate::ExperimentResult,
}

fn run_experiments(
    config: &ExperimentConfig,
    out: &mut Outcome,
) -> Result<Vec<RunExperiment>, Error> {
    let sim = config
        .simulation
        .as_ref()
        .expect("validated with the slln checks");
    let model = config
        .simulation_model
        .as_ref()
        .expect("validated with the slln checks");
    let seed = config.seed.expect("validated with the slln checks");
    let mut runs = Vec::with_capacity(config.schedules.len());
    for (
        k,
        Schedule {
            label, schedule, ..
        },
    ) in config.schedules.iter().enumerate()
    {
        let validation = validate_schedule(schedule, sim.horizon)?;
        let spec = ExperimentSpec {
            strategies: sim.strategies.clone(),
            paths_per_strategy: sim.paths,
            horizon: sim.horizon,
            n0: sim.n0,
            epsilon: sim.epsilon,
            seed: credal::simulate::derive_seed(seed, k as u64),
            phis: sim.phis.clone(),
            grid_per_decade: sim.grid_per_decade,
        };
        let result = run_slln_experiment(model, schedule, &spec)?;
        out.experiments.push(ExperimentSummary {
            schedule: label.clone(),
            validation,
            aggregates: result.aggregates.clone(),
        });
        out.trajectories.extend(
            result
                .trajectories
                .iter()
                .map(|r| (label.clone(), r.clone())),
        );
        runs.push(RunExperiment {
            label: label.clone(),
            result,
        });
    }
    Ok(runs)
}

fn slln(config: &ExperimentConfig, req: &CheckRequest, runs: &[RunExperiment], out: &mut Outcome) {
    let sim = config.simulation.as_ref().expect("validated");
    for run in runs {
        let prefix = format!("slln/{}", run.label);
        let all = run.result.overall();
        out.push(
            &prefix,
            req,
            Check::at_most(
                "upper_exceedance",
                &all.upper_exceedance,
                &sim.max_upper_exceedance,
                &0.0,
            ),
        );
        out.push(
            &prefix,
            req,
            Check::at_most(
                "lower_undershoot",
                &all.lower_undershoot,
                &sim.max_lower_undershoot,
                &0.0,
            ),
        );
        let control = run
            .result
            .aggregates
            .iter()
            .find(|a| a.strategy == "drift-max")
            .expect("validated");
        out.push(
            &prefix,
            req,
            Check::at_least(
                "negative_control",
                &control.swapped_exceedance,
                &sim.min_control_exceedance,
                &0.0,
            ),
        );
        let sandwich = run.result.paths.iter().all(|p| p.sandwich);
        out.push(
            &prefix,
            req,
            Check::verdict("sandwich", sandwich, Value::Null),
        );
    }
}

/// Lipschitz constant of `φ` near `0`, used to size the slack `L·ε`.
pub fn lipschitz_near_zero(phi: &Phi) -> f64 {
    match phi {
        Phi::Identity | Phi::Clamp { .. } | Phi::Abs => 1.0,
        Phi::Affine { slope, .. } => slope.abs(),
        Phi::Exp { rate } => rate.abs(),
        Phi::Polynomial { coefficients } => coefficients.get(1).map_or(0.0, |c| c.abs()),
        Phi::MaxAffine { pieces } => pieces.iter().map(|p| p[0].abs()).fold(0.0, f64::max),
    }
}

fn phi_name(phi: &Phi) -> String {
    serde_json::to_value(phi)
        .ok()
        .and_then(|v| v.get("kind").and_then(Value::as_str).map(str::to_string))
        .unwrap_or_else(|| "phi".into())
}

fn strassen(
    config: &ExperimentConfig,
    req: &CheckRequest,
    runs: &[RunExperiment],
    out: &mut Outcome,
) {
    let sim = config.simulation.as_ref().expect("validated");
    for run in runs {
        let prefix = format!("strassen/{}", run.label);
        for (k, phi) in sim.phis.iter().enumerate() {
            let slack = lipschitz_near_zero(phi) * sim.epsilon;
            let (worst, bound) = run
                .result
                .paths
                .iter()
                .map(|p| (p.strassen[k].sup, p.strassen[k].bound))
                .fold((f64::NEG_INFINITY, f64::NAN), |(w, _), (s, b)| {
                    (w.max(s), b)
                });
            let rhs = bound + slack;
            let c = Check::at_most(format!("{}#{k}", phi_name(phi)), &worst, &rhs, &0.0)
                .with_witness(json!({ "phi": phi, "bound": bound, "slack": slack }));
            out.push(&prefix, req, c);
            if *phi == Phi::Identity {
                let exact = run
                    .result
                    .paths
                    .iter()
                    .all(|p| p.strassen[k].sup == p.max_upper && p.strassen[k].bound == 0.0);
                out.push(
                    &prefix,
                    req,
                    Check::verdict("identity_reduction", exact, Value::Null),
                );
            }
        }
    }
}
