//! Acceptance run: one line per criterion.
//!
//! Criteria that are known to be out of reach at the prescribed horizon are
//! still evaluated at their stated tolerance and reported as `FAIL`. They do
//! not affect the exit status unless `CREDAL_ACCEPTANCE_STRICT=1` is set.

use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use credal::capacity::capacity_axiom_report;
use credal::dependence::{
    binomial_pair_forward_value, binomial_pair_model, check_negative_association,
    check_vertical_independence, default_family, exp_product_bound_gap, ramp_family, Direction,
    GridSpec, MonotoneMap, SequenceModel,
};
use credal::expectation::{
    expectation_chain, inequality_suite, InequalityInputs, OracleLimits, ScalarFn,
};
use credal::serial::{fixture_rng, random_credal, random_fixture, random_variable};
use credal::simulate::{
    run_slln_experiment, AdversaryStrategy, ExperimentResult, ExperimentSpec, Phi,
};
use credal::slln::{elementary_exp_bound_check, make_schedule, truncation_report, ScheduleKind};
use credal::{ratio, CredalSet, Event, RandomVariable};
use rand::Rng;

struct Line {
    id: &'static str,
    pass: bool,
    known_unattainable: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn line(id: &'static str, pass: bool, detail: String) -> Line {
    Line {
        id,
        pass,
        known_unattainable: false,
        detail,
    }
}

fn chain() -> Line {
    let (res, dt) = timed(|| {
        let mut rng = fixture_rng(1);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let (c, x) = random_fixture(&mut rng, 6, 8, -10.0, 10.0);
            let v = expectation_chain(&c, &x).expect("chain").as_array();
            for w in v.windows(2) {
                worst = worst.max(w[0] - w[1]);
            }
        }
        let c = CredalSet::from_weights(vec![
            vec![ratio(1, 2), ratio(0, 1), ratio(1, 2)],
            vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)],
        ])
        .unwrap();
        let x = RandomVariable::new(vec![ratio(0, 1), ratio(1, 1), ratio(2, 1)]).unwrap();
        let exact = expectation_chain(&c, &x).unwrap().as_array()
            == [ratio(1, 2), ratio(1, 1), ratio(1, 1), ratio(3, 2)];
        (worst, exact)
    });
    let (worst, exact) = res;
    line(
        "1 chain",
        worst <= 1e-12 && exact && dt < Duration::from_secs(5),
        format!("1000 instances, worst link {worst:.3e}, fixture exact={exact}, {dt:.2?}"),
    )
}

fn capacity() -> Line {
    let (res, dt) = timed(|| {
        let mut rng = fixture_rng(2);
        let mut failures = 0;
        let mut cases = 0;
        for n in 1..=8 {
            for _ in 0..25 {
                let c = random_credal(&mut rng, 6, n);
                let events: Vec<Event> = Event::all(n).collect();
                let r = capacity_axiom_report(&c, &events).unwrap();
                failures += r.failures().count();
                cases += 1;
            }
        }
        (cases, failures)
    });
    let (cases, failures) = res;
    line(
        "2 capacity axioms",
        failures == 0 && dt < Duration::from_secs(5),
        format!("{cases} credal sets, all events, {failures} failures, {dt:.2?}"),
    )
}

fn inequalities() -> Line {
    let mut rng = fixture_rng(3);
    let fs = [
        ScalarFn::Affine {
            slope: 1.0,
            intercept: 11.0,
        },
        ScalarFn::Power { exponent: 2.0 },
        ScalarFn::Exp { rate: 1.0 },
    ];
    let mut failures = Vec::new();
    for k in 0..1000 {
        let (c, x) = random_fixture(&mut rng, 6, 8, -10.0, 10.0);
        let y = random_variable(&mut rng, c.size(), -10.0, 10.0);
        let f = &fs[k % 3];
        let threshold = rng.gen_range(0.1..10.0);
        for (p, q) in [(2.0, 2.0), (3.0, 1.5)] {
            let r = inequality_suite(
                &c,
                &InequalityInputs {
                    x: &x,
                    y: &y,
                    p,
                    q,
                    threshold,
                    f,
                },
            )
            .unwrap();
            failures.extend(r.failures().map(|c| c.check.clone()));
        }
    }
    line(
        "3 inequalities",
        failures.is_empty(),
        format!("1000 instances x 2 exponent pairs, failures {failures:?}"),
    )
}

fn binomial_pair() -> Line {
    let (res, dt) = timed(|| {
        let a = binomial_pair_forward_value(&[ratio(3, 10), ratio(7, 10)]).unwrap();
        let b = binomial_pair_forward_value(&[ratio(2, 5), ratio(3, 5)]).unwrap();
        let exact = a == ratio(-21, 100) && b == ratio(-24, 100);
        let mut na = true;
        for p in [[0.3, 0.7], [0.4, 0.6]] {
            let m = binomial_pair_model(&p).unwrap();
            let fam = default_family(&m, Direction::Increasing);
            na &= check_negative_association(&m, 2, &fam, &1e-9, OracleLimits::default())
                .unwrap()
                .holds();
        }
        (a, b, exact, na)
    });
    let (a, b, exact, na) = res;
    line(
        "4 binomial pair",
        exact && na && dt < Duration::from_secs(10),
        format!("forward values {a} and {b}, exact={exact}, NA holds={na}, {dt:.2?}"),
    )
}

fn rectangular() -> Line {
    let mut rng = fixture_rng(5);
    let limits = OracleLimits::default();
    let mut worst_vertical = 0.0f64;
    let mut na_failures = 0;
    let mut worst_exp_gap = f64::INFINITY;
    for _ in 0..50 {
        let size = rng.gen_range(2..=3);
        let c = random_credal(&mut rng, 3, size);
        let vars = (0..rng.gen_range(1..=2))
            .map(|_| random_variable(&mut rng, size, -2.0, 2.0))
            .collect();
        let m = SequenceModel::rectangular(c, vars).unwrap();
        let n = rng.gen_range(2..=4);
        let (lo, hi) = m.value_range();
        let fam = ramp_family(
            &GridSpec::Values(vec![lo, (lo + hi) / 2.0, hi]),
            &GridSpec::Values(vec![0.5, 2.0]),
            Direction::Increasing,
        )
        .unwrap();
        let v = check_vertical_independence(&m, n, fam.functions(), &1e-12, limits).unwrap();
        worst_vertical = worst_vertical.max(v.worst_gap);
        let na = check_negative_association(&m, n, &fam, &1e-12, limits).unwrap();
        if !na.holds() {
            na_failures += 1;
            continue;
        }
        let maps: Vec<_> = (0..n)
            .map(|i| MonotoneMap::affine(0.25 + 0.5 * i as f64, rng.gen_range(-1.0..1.0)))
            .collect();
        worst_exp_gap = worst_exp_gap.min(exp_product_bound_gap(&m, n, &maps, limits).unwrap());
    }
    line(
        "5 rectangular implications",
        worst_vertical <= 1e-12 && na_failures == 0 && worst_exp_gap >= -1e-12,
        format!(
            "50 models, vertical worst {worst_vertical:.3e}, NA failures {na_failures}, exp gap min {worst_exp_gap:.3e}"
        ),
    )
}

fn truncation() -> Line {
    let mut rng = fixture_rng(6);
    let mut failures = Vec::new();
    for big_c in [0.1, 1.0, 10.0] {
        let s = make_schedule(ScheduleKind::Kolmogorov, 1.0, 0.5, big_c).unwrap();
        for _ in 0..200 {
            let (c, x) = random_fixture(&mut rng, 6, 8, -10.0, 10.0);
            let i = rng.gen_range(1..=100_000);
            let r = truncation_report(&s, i, &c, &x).unwrap();
            failures.extend(
                r.failures()
                    .map(|f| format!("{} (C={big_c}, i={i})", f.check)),
            );
        }
    }
    line(
        "6 truncation",
        failures.is_empty(),
        format!("600 coordinates, failures {failures:?}"),
    )
}

fn elementary() -> Line {
    let mut failures = 0;
    let mut count = 0;
    for alpha in [0.1, 0.25, 0.5, 0.75, 1.0] {
        for k in -1000..=1000 {
            let x = k as f64 / 100.0;
            count += 1;
            if !elementary_exp_bound_check(x, alpha).unwrap().pass {
                failures += 1;
            }
        }
    }
    line(
        "7 elementary bound",
        failures == 0,
        format!("{count} grid points, {failures} failures"),
    )
}

struct Slln {
    label: &'static str,
    result: ExperimentResult,
    elapsed: Duration,
}

const EPSILON: f64 = 0.05;

fn slln_runs() -> &'static [Slln] {
    static RUNS: OnceLock<Vec<Slln>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let c = CredalSet::from_weights(vec![vec![0.7, 0.3], vec![0.3, 0.7]]).unwrap();
        let x = RandomVariable::new(vec![0.0, 1.0]).unwrap();
        let model = SequenceModel::rectangular(c, vec![x]).unwrap();
        let spec = ExperimentSpec {
            strategies: vec![
                AdversaryStrategy::Fixed { index: 1 },
                AdversaryStrategy::Cyclic,
                AdversaryStrategy::IidRandom { seed: 7 },
                AdversaryStrategy::DriftMax,
            ],
            paths_per_strategy: 200,
            horizon: 100_000,
            n0: 10_000,
            epsilon: EPSILON,
            seed: 20240917,
            phis: vec![Phi::Identity, Phi::Exp { rate: 1.0 }],
            grid_per_decade: 0,
        };
        [
            ("kolmogorov(beta=0.5)", ScheduleKind::Kolmogorov),
            (
                "mz(p=1.25,beta=0.5)",
                ScheduleKind::Marcinkiewicz { p: 1.25 },
            ),
        ]
        .into_iter()
        .map(|(label, kind)| {
            let s = make_schedule(kind, 1.0, 0.5, 1.0).unwrap();
            let (result, elapsed) = timed(|| run_slln_experiment(&model, &s, &spec).unwrap());
            Slln {
                label,
                result,
                elapsed,
            }
        })
        .collect()
    })
}

fn slln(run: &Slln, id: &'static str, mz: bool) -> Line {
    let all = run.result.overall();
    let control = run
        .result
        .aggregates
        .iter()
        .find(|a| a.strategy == "drift-max")
        .map_or(0.0, |a| a.swapped_exceedance);
    let pass = all.upper_exceedance == 0.0
        && all.lower_undershoot == 0.0
        && control >= 0.95
        && run.elapsed < Duration::from_secs(120);
    Line {
        id,
        pass,
        known_unattainable: mz,
        detail: format!(
            "{}: upper exceedance {}, lower undershoot {}, control {control}, {:.2?}",
            run.label, all.upper_exceedance, all.lower_undershoot, run.elapsed
        ),
    }
}

fn strassen(run: &Slln, id: &'static str, mz: bool) -> Line {
    let paths = &run.result.paths;
    let exp_sup = paths
        .iter()
        .map(|p| p.strassen[1].sup)
        .fold(f64::NEG_INFINITY, f64::max);
    let exp_ok = paths.iter().all(|p| p.strassen[1].sup <= 1.0 + EPSILON);
    let identity_sup = paths
        .iter()
        .map(|p| p.strassen[0].sup)
        .fold(f64::NEG_INFINITY, f64::max);
    let reduces = paths.iter().all(|p| p.strassen[0].sup == p.max_upper);
    let identity_ok = paths.iter().all(|p| p.strassen[0].sup <= EPSILON);
    Line {
        id,
        pass: exp_ok && identity_ok && reduces,
        known_unattainable: mz,
        detail: format!(
            "{}: max exp sup {exp_sup:.4} vs {}, max identity sup {identity_sup:.4} vs {EPSILON}, identity equals max S_n: {reduces}",
            run.label,
            1.0 + EPSILON
        ),
    }
}

const DETERMINISM_CONFIG: &str = r#"{
  "model": {"measures": [[0.7, 0.3], [0.3, 0.7]], "variables": {"X": [0, 1]}},
  "schedules": [
    {"kind": "kolmogorov", "alpha": 1, "beta": 0.5},
    {"kind": "mz", "p": 1.25, "alpha": 1, "beta": 0.5}
  ],
  "checks": ["slln", "strassen"],
  "seed": 99,
  "simulation": {"N": 20000, "paths": 20, "n0": 2000}
}"#;

fn determinism() -> Line {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("config.json");
    std::fs::write(&cfg, DETERMINISM_CONFIG).unwrap();
    let run = |jobs: &str| {
        let out = tmp.path().join(format!("jobs{jobs}"));
        Command::new(env!("CARGO_BIN_EXE_credal"))
            .args(["simulate", "--jobs", jobs, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .unwrap();
        out
    };
    let a = run("1");
    let b = run("4");
    let same = |f: &str| {
        let read = |d: &Path| std::fs::read(d.join(f)).ok();
        matches!((read(&a), read(&b)), (Some(x), Some(y)) if x == y)
    };
    let (report, csv) = (same("report.json"), same("trajectories.csv"));
    line(
        "10 determinism",
        report && csv,
        format!("--jobs 1 vs --jobs 4: report.json identical={report}, trajectories.csv identical={csv}"),
    )
}

fn main() {
    let strict = std::env::var("CREDAL_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut lines = vec![
        chain(),
        capacity(),
        inequalities(),
        binomial_pair(),
        rectangular(),
        truncation(),
        elementary(),
    ];
    let runs = slln_runs();
    lines.push(slln(&runs[0], "8a slln kolmogorov", false));
    lines.push(slln(&runs[1], "8b slln mz", true));
    lines.push(strassen(&runs[0], "9a strassen kolmogorov", false));
    lines.push(strassen(&runs[1], "9b strassen mz", true));
    lines.push(determinism());

    let mut blocking = 0;
    for l in &lines {
        let tag = match (l.pass, l.known_unattainable) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable at this horizon)",
            (false, false) => "FAIL",
        };
        println!("{tag:<5} criterion {}: {}", l.id, l.detail);
        if !l.pass && (strict || !l.known_unattainable) {
            blocking += 1;
        }
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    if blocking > 0 {
        std::process::exit(1);
    }
}
