//! Artifacts: `report.json`, `summary.txt`, `trajectories.csv` and a gnuplot
//! script.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::run::{Entry, ExperimentSummary, Outcome};

#[derive(Serialize)]
struct ReportFile<'a> {
    status: &'static str,
    tolerance: f64,
    seed: Option<u64>,
    checks: &'a [Entry],
    experiments: &'a [ExperimentSummary],
}

#[derive(Serialize)]
struct CsvRow<'a> {
    schedule: &'a str,
    path_id: usize,
    strategy: &'a str,
    n: usize,
    #[serde(rename = "S_upper")]
    s_upper: f64,
    #[serde(rename = "S_lower")]
    s_lower: f64,
}

pub fn report_json(config: &ExperimentConfig, outcome: &Outcome) -> String {
    let file = ReportFile {
        status: if outcome.all_ok() { "pass" } else { "fail" },
        tolerance: config.tolerance,
        seed: config.seed,
        checks: &outcome.entries,
        experiments: &outcome.experiments,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("report serializes");
    s.push('\n');
    s
}

pub fn summary_text(outcome: &Outcome) -> String {
    let mut s = String::new();
    for e in &outcome.entries {
        let tag = match (e.ok, e.expected_violation) {
            (true, false) => "PASS",
            (true, true) => "PASS (expected violation)",
            (false, false) => "FAIL",
            (false, true) => "FAIL (violation expected, none found)",
        };
        let _ = writeln!(
            s,
            "{tag:<8} {}  lhs={} rhs={} gap={}",
            e.check, e.lhs, e.rhs, e.gap
        );
    }
    for x in &outcome.experiments {
        for a in &x.aggregates {
            let _ = writeln!(
                s,
                "experiment {} [{}] paths={} upper_exceedance={} lower_undershoot={} swapped_exceedance={}",
                x.schedule, a.strategy, a.paths, a.upper_exceedance, a.lower_undershoot, a.swapped_exceedance
            );
        }
    }
    let _ = writeln!(
        s,
        "status: {}",
        if outcome.all_ok() { "pass" } else { "fail" }
    );
    s
}

const PLOT: &str = "\
set datafile separator ','
set logscale x
set key off
set xlabel 'n'
set ylabel 'S_n'
plot 'trajectories.csv' every ::1 using 4:5 with points pointtype 0 title 'upper-centered', \\
     '' every ::1 using 4:6 with points pointtype 0 title 'lower-centered'
";

pub fn write_all(dir: &Path, config: &ExperimentConfig, outcome: &Outcome) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), report_json(config, outcome))?;
    fs::write(dir.join("summary.txt"), summary_text(outcome))?;
    if !outcome.experiments.is_empty() {
        let mut w = csv::Writer::from_path(dir.join("trajectories.csv"))?;
        for (label, r) in &outcome.trajectories {
            w.serialize(CsvRow {
                schedule: label,
                path_id: r.path_id,
                strategy: &r.strategy,
                n: r.n,
                s_upper: r.s_upper,
                s_lower: r.s_lower,
            })?;
        }
        w.flush()?;
        fs::write(dir.join("plot.gp"), PLOT)?;
    }
    Ok(())
}
