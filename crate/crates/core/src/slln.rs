//! Weight schedules, the truncation construction, the exponential moment
//! bound and normalized partial sums for weighted strong laws.
//!
//! Everything here is `f64`: logarithms and exponentials are involved
//! throughout. `log` is the natural logarithm.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dependence::SequenceModel;
use crate::error::{Error, Result};
use crate::expectation::{joint_upper_expectation, upper_expectation, OracleLimits};
use crate::model::{CredalSet, RandomVariable};
use crate::report::{Check, Report};

pub const DEFAULT_EPSILON: f64 = 0.05;

/// Growth factor `r_N / r_{N/100}` required by [`validate_schedule`].
pub const SCHEDULE_GROWTH_FACTOR: f64 = 1.1;

/// The weights `a_i`, `i ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeightRule {
    Constant {
        value: f64,
    },
    /// `scale·(1 + 1/i)`, decreasing to `scale`.
    HarmonicBounded {
        scale: f64,
    },
    /// `values[i-1]`, held at the last entry past the end.
    Table {
        values: Vec<f64>,
    },
}

impl WeightRule {
    pub fn at(&self, i: usize) -> f64 {
        match self {
            WeightRule::Constant { value } => *value,
            WeightRule::HarmonicBounded { scale } => scale * (1.0 + 1.0 / i as f64),
            WeightRule::Table { values } => table_at(values, i),
        }
    }
}

/// The normalizers `A_n`, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormalizerRule {
    /// `A_n = n`
    Linear,
    /// `A_n = n^{1/p}`
    Power { p: f64 },
    /// `values[n-1]`, held at the last entry past the end.
    Table { values: Vec<f64> },
}

impl NormalizerRule {
    pub fn at(&self, n: usize) -> f64 {
        match self {
            NormalizerRule::Linear => n as f64,
            NormalizerRule::Power { p } => (n as f64).powf(1.0 / p),
            NormalizerRule::Table { values } => table_at(values, n),
        }
    }
}

fn table_at(values: &[f64], i: usize) -> f64 {
    match values.len() {
        0 => f64::NAN,
        len => values[(i.max(1) - 1).min(len - 1)],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSchedule {
    pub weights: WeightRule,
    pub normalizer: NormalizerRule,
    pub alpha: f64,
    pub beta: f64,
    /// Truncation constant.
    #[serde(rename = "C")]
    pub c: f64,
    /// Exponential moment multiplier.
    pub m: f64,
}

impl WeightSchedule {
    /// `a_i`, 1-based.
    pub fn a(&self, i: usize) -> f64 {
        self.weights.at(i)
    }

    /// `A_n`, 1-based.
    pub fn big_a(&self, n: usize) -> f64 {
        self.normalizer.at(n)
    }

    pub fn with_m(mut self, m: f64) -> Result<Self> {
        if !(m > 1.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("m must exceed 1, got {m}")));
        }
        self.m = m;
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleKind {
    /// `a_i = 1`, `A_n = n`.
    Kolmogorov,
    /// `a_i = 1`, `A_n = n^{1/p}`.
    Marcinkiewicz { p: f64 },
    Custom {
        weights: WeightRule,
        normalizer: NormalizerRule,
    },
}

/// Builds and validates a schedule. `m` defaults to `2/ε` for the default
/// `ε`.
pub fn make_schedule(kind: ScheduleKind, alpha: f64, beta: f64, c: f64) -> Result<WeightSchedule> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "C must be positive, got {c}"
        )));
    }
    let hi = alpha.min(1.0);
    let mut lo = 0.0;
    let (weights, normalizer) = match kind {
        ScheduleKind::Kolmogorov => (WeightRule::Constant { value: 1.0 }, NormalizerRule::Linear),
        ScheduleKind::Marcinkiewicz { p } => {
            if !(p >= 1.0 && p < 1.0 + hi) {
                return Err(Error::POutOfRange(p));
            }
            lo = p - 1.0;
            (
                WeightRule::Constant { value: 1.0 },
                NormalizerRule::Power { p },
            )
        }
        ScheduleKind::Custom {
            weights,
            normalizer,
        } => (weights, normalizer),
    };
    if !(beta > lo && beta < hi) {
        return Err(Error::BetaOutOfRange { beta, lo, hi });
    }
    Ok(WeightSchedule {
        weights,
        normalizer,
        alpha,
        beta,
        c,
        m: 2.0 / DEFAULT_EPSILON,
    })
}

/// Serialized schedule description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "C", default = "one")]
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Custom `a_i` table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    /// Custom `A_n` table.
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub big_a: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<WeightSchedule> {
        let kind = match self.kind.as_str() {
            "kolmogorov" => ScheduleKind::Kolmogorov,
            "mz" => ScheduleKind::Marcinkiewicz {
                p: self
                    .p
                    .ok_or_else(|| Error::InvalidParameter("mz schedule needs p".into()))?,
            },
            "custom" => ScheduleKind::Custom {
                weights: match &self.a {
                    Some(values) => WeightRule::Table {
                        values: values.clone(),
                    },
                    None => WeightRule::Constant { value: 1.0 },
                },
                normalizer: NormalizerRule::Table {
                    values: self
                        .big_a
                        .clone()
                        .ok_or_else(|| Error::InvalidParameter("custom schedule needs A".into()))?,
                },
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown schedule kind {other:?}"
                )))
            }
        };
        let s = make_schedule(kind, self.alpha, self.beta, self.c)?;
        match self.m {
            Some(m) => s.with_m(m),
            None => Ok(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleReport {
    /// `(n, r_n)` with `r_n = A_n / n^{1/(β+1)}` at `N/100`, `N/10`, `N`.
    pub probes: Vec<(usize, f64)>,
    pub strictly_increasing: bool,
    pub growth: f64,
    pub a_sup: f64,
    pub a_positive: bool,
    pub normalizer_increasing: bool,
    pub pass: bool,
}

/// Finite-horizon proxy for `A_n / n^{1/(β+1)} → ∞`: `r_n` strictly
/// increasing over three decades-spaced probes with
/// `r_N > SCHEDULE_GROWTH_FACTOR · r_{N/100}`, plus `a_i > 0` bounded and `A`
/// strictly increasing on `[1, N]`. A pass is not a proof of the limit.
pub fn validate_schedule(s: &WeightSchedule, horizon: usize) -> Result<ScheduleReport> {
    if horizon < 100 {
        return Err(Error::InvalidParameter(format!(
            "horizon must be at least 100, got {horizon}"
        )));
    }
    let exponent = 1.0 / (s.beta + 1.0);
    let probes: Vec<(usize, f64)> = [horizon / 100, horizon / 10, horizon]
        .into_iter()
        .map(|n| (n, s.big_a(n) / (n as f64).powf(exponent)))
        .collect();
    let strictly_increasing = probes.windows(2).all(|w| w[1].1 > w[0].1);
    let growth = probes[2].1 / probes[0].1;

    let mut a_sup = 0.0f64;
    let mut a_positive = true;
    let mut normalizer_increasing = true;
    let mut prev = f64::NEG_INFINITY;
    for i in 1..=horizon {
        let a = s.a(i);
        a_positive &= a > 0.0 && a.is_finite();
        a_sup = a_sup.max(a);
        let big = s.big_a(i);
        normalizer_increasing &= big > prev && big > 0.0;
        prev = big;
    }
    let pass = strictly_increasing
        && growth > SCHEDULE_GROWTH_FACTOR
        && a_positive
        && a_sup.is_finite()
        && normalizer_increasing;
    Ok(ScheduleReport {
        probes,
        strictly_increasing,
        growth,
        a_sup,
        a_positive,
        normalizer_increasing,
        pass,
    })
}

/// Truncation constants for coordinate `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationParams {
    pub i: usize,
    /// `𝔼[X_i]`
    pub b: f64,
    /// `C·A_i / (a_i·log(i+1))`
    pub c: f64,
    /// Recentering so that `𝔼[Y_i] = 𝔼[X_i]`.
    pub d: f64,
}

fn clip(v: f64, c: f64) -> f64 {
    v.clamp(-c, c)
}

pub fn truncation_params(
    s: &WeightSchedule,
    i: usize,
    credal: &CredalSet<f64>,
    x: &RandomVariable<f64>,
) -> Result<TruncationParams> {
    if i == 0 {
        return Err(Error::DegenerateLog);
    }
    let b = upper_expectation(credal, x)?;
    let c = s.c * s.big_a(i) / (s.a(i) * ((i + 1) as f64).ln());
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "truncation level {c} at i = {i}"
        )));
    }
    let clipped = x.map(|v| clip(v - b, c));
    let d = b - upper_expectation(credal, &clipped)?;
    Ok(TruncationParams { i, b, c, d })
}

/// `Y = clamp(X - b, -c, c) + d`.
pub fn truncate(x: &RandomVariable<f64>, params: &TruncationParams) -> RandomVariable<f64> {
    x.map(|v| clip(v - params.b, params.c) + params.d)
}

/// Mean preservation, the pointwise bound `a_i|Y - 𝔼Y| ≤ 6·C·A_i/log(i+1)`
/// and `𝔼|Y - 𝔼Y|^{α+1} ≤ 𝔼(|X - 𝔼X| + 𝔼|X - 𝔼X|)^{α+1}` for one
/// coordinate.
pub fn truncation_report(
    s: &WeightSchedule,
    i: usize,
    credal: &CredalSet<f64>,
    x: &RandomVariable<f64>,
) -> Result<Report> {
    let t = truncation_params(s, i, credal, x)?;
    let y = truncate(x, &t);
    let ey = upper_expectation(credal, &y)?;
    let mut r = Report::new();
    r.record(
        Check::equal("truncation_mean", &ey, &t.b, &1e-12)
            .with_witness(json!({ "i": i, "b": t.b, "c": t.c, "d": t.d })),
    );
    let bound = 6.0 * s.c * s.big_a(i) / ((i + 1) as f64).ln();
    let worst = y
        .values()
        .iter()
        .map(|v| s.a(i) * (v - ey).abs())
        .fold(0.0, f64::max);
    r.record(Check::at_most(
        "truncation_bound",
        &worst,
        &bound,
        &(1e-12 * bound.max(1.0)),
    ));
    let q = s.alpha + 1.0;
    let lhs = upper_expectation(credal, &y.map(|v| (v - ey).abs().powf(q)))?;
    let dev = x.map(|v| (v - t.b).abs());
    let mean_dev = upper_expectation(credal, &dev)?;
    let rhs = upper_expectation(credal, &dev.map(|v| (v + mean_dev).powf(q)))?;
    r.record(Check::at_most(
        "truncation_moment",
        &lhs,
        &rhs,
        &(1e-12 * rhs.max(1.0)),
    ));
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `e^x ≤ 1 + x + |x|^{α+1} e^{2|x|}` with `1e-12` slack.
pub fn elementary_exp_bound_check(x: f64, alpha: f64) -> Result<ExpBoundCheck> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let lhs = x.exp();
    let rhs = 1.0 + x + x.abs().powf(alpha + 1.0) * (2.0 * x.abs()).exp();
    Ok(ExpBoundCheck {
        lhs,
        rhs,
        pass: lhs <= rhs + 1e-12,
    })
}

fn exp_tilt(s: &WeightSchedule, n: usize) -> f64 {
    s.m * ((n + 1) as f64).ln() / s.big_a(n)
}

fn upper_centers(model: &SequenceModel<f64>, n: usize) -> Result<Vec<f64>> {
    (0..n)
        .map(|i| upper_expectation(model.credal(), model.coordinate(i)))
        .collect()
}

/// `𝔼[exp{(m·log(n+1)/A_n) Σ_{i≤n} a_i (X_i - 𝔼X_i)}]` by the joint oracle.
pub fn exp_moment_bound(
    model: &SequenceModel<f64>,
    s: &WeightSchedule,
    n: usize,
    limits: OracleLimits,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "exponential moment needs n >= 1".into(),
        ));
    }
    let theta = exp_tilt(s, n);
    let centers = upper_centers(model, n)?;
    let integrand = |v: &[f64]| {
        let sum: f64 = v
            .iter()
            .zip(&centers)
            .enumerate()
            .map(|(i, (x, c))| s.a(i + 1) * (x - c))
            .sum();
        (theta * sum).exp()
    };
    Ok(joint_upper_expectation(model, integrand, n, limits)?.value)
}

/// `∏_{i≤n} 𝔼[exp{(m·log(n+1)/A_n) a_i (X_i - 𝔼X_i)}]`.
pub fn exp_moment_product_bound(
    model: &SequenceModel<f64>,
    s: &WeightSchedule,
    n: usize,
) -> Result<f64> {
    let theta = exp_tilt(s, n);
    let centers = upper_centers(model, n)?;
    let mut product = 1.0;
    for (i, c) in centers.iter().enumerate() {
        let a = s.a(i + 1);
        let e = model.coordinate(i).map(|x| (theta * a * (x - c)).exp());
        product *= upper_expectation(model.credal(), &e)?;
    }
    Ok(product)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpMomentRow {
    pub n: usize,
    pub value: f64,
    pub product_bound: f64,
}

/// Exponential moments and their product bounds for `n = 1..=n_max`.
pub fn exp_moment_sequence(
    model: &SequenceModel<f64>,
    s: &WeightSchedule,
    n_max: usize,
    limits: OracleLimits,
) -> Result<Vec<ExpMomentRow>> {
    (1..=n_max)
        .map(|n| {
            Ok(ExpMomentRow {
                n,
                value: exp_moment_bound(model, s, n, limits)?,
                product_bound: exp_moment_product_bound(model, s, n)?,
            })
        })
        .collect()
}

/// `S_n = Σ_{i≤n} a_i (x_i - centers_i) / A_n`, streamed.
pub fn normalized_partial_sums(
    path: &[f64],
    s: &WeightSchedule,
    centers: &[f64],
) -> Result<Vec<f64>> {
    if centers.len() < path.len() {
        return Err(Error::LengthMismatch {
            needed: path.len(),
            got: centers.len(),
        });
    }
    let mut acc = 0.0;
    Ok(path
        .iter()
        .zip(centers)
        .enumerate()
        .map(|(k, (x, c))| {
            let i = k + 1;
            acc += s.a(i) * (x - c);
            acc / s.big_a(i)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummabilityProfile {
    pub horizon: usize,
    pub total: f64,
    pub last_decade: f64,
    pub relative: f64,
    pub flat: bool,
}

/// Partial sums of `Σ (log(i+1))^α / A_i^{α+1}`; flat when the increment over
/// `(N/10, N]` is below 1% of the total.
pub fn summability_profile(s: &WeightSchedule, horizon: usize) -> SummabilityProfile {
    let mut total = 0.0;
    let mut last_decade = 0.0;
    for i in 1..=horizon {
        let term = ((i + 1) as f64).ln().powf(s.alpha) / s.big_a(i).powf(s.alpha + 1.0);
        total += term;
        if i > horizon / 10 {
            last_decade += term;
        }
    }
    let relative = last_decade / total;
    SummabilityProfile {
        horizon,
        total,
        last_decade,
        relative,
        flat: relative < 0.01,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn kolmogorov() -> WeightSchedule {
        make_schedule(ScheduleKind::Kolmogorov, 1.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn schedule_examples() {
        let k = kolmogorov();
        assert_eq!(k.a(7), 1.0);
        assert_relative_eq!(k.big_a(10) / 10f64.powf(1.0 / 1.5), 2.154, epsilon = 1e-3);
        let mz = make_schedule(ScheduleKind::Marcinkiewicz { p: 1.25 }, 1.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(mz.big_a(1000), 1000f64.powf(0.8));
        assert_eq!(
            make_schedule(ScheduleKind::Marcinkiewicz { p: 1.25 }, 1.0, 0.2, 1.0),
            Err(Error::BetaOutOfRange {
                beta: 0.2,
                lo: 0.25,
                hi: 1.0
            })
        );
        assert_eq!(
            make_schedule(ScheduleKind::Marcinkiewicz { p: 2.5 }, 3.0, 0.5, 1.0),
            Err(Error::POutOfRange(2.5))
        );
        assert!(make_schedule(ScheduleKind::Kolmogorov, 0.4, 0.5, 1.0).is_err());
        assert_eq!(k.m, 40.0);
    }

    #[test]
    fn validate_examples() {
        let r = validate_schedule(&kolmogorov(), 10_000).unwrap();
        assert!(r.pass);
        assert_relative_eq!(r.probes[0].1, 100f64.powf(1.0 / 3.0), epsilon = 1e-12);
        assert_relative_eq!(r.probes[2].1, 10_000f64.powf(1.0 / 3.0), epsilon = 1e-9);

        let log_table = (1..=10_000).map(|n| ((n + 1) as f64).ln()).collect();
        let log = make_schedule(
            ScheduleKind::Custom {
                weights: WeightRule::Constant { value: 1.0 },
                normalizer: NormalizerRule::Table { values: log_table },
            },
            1.0,
            0.5,
            1.0,
        )
        .unwrap();
        assert!(!validate_schedule(&log, 10_000).unwrap().pass);

        let boundary = make_schedule(
            ScheduleKind::Custom {
                weights: WeightRule::Constant { value: 1.0 },
                normalizer: NormalizerRule::Power { p: 1.5 },
            },
            1.0,
            0.5,
            1.0,
        )
        .unwrap();
        assert!(!validate_schedule(&boundary, 10_000).unwrap().pass);

        let mz = make_schedule(ScheduleKind::Marcinkiewicz { p: 1.25 }, 1.0, 0.5, 1.0).unwrap();
        assert!(validate_schedule(&mz, 100_000).unwrap().pass);
        assert!(validate_schedule(&mz, 99).is_err());
    }

    #[test]
    fn truncation_examples() {
        let s = kolmogorov();
        let c = CredalSet::from_weights(vec![vec![0.5, 0.5]]).unwrap();
        let x = RandomVariable::new(vec![0.0, 1.0]).unwrap();
        let t = truncation_params(&s, 1, &c, &x).unwrap();
        assert_relative_eq!(t.c, 1.0 / 2f64.ln(), epsilon = 1e-12);
        assert_eq!(truncate(&x, &t).values(), x.values());

        let manual = TruncationParams {
            i: 1,
            b: 0.5,
            c: 0.2,
            d: 0.0,
        };
        let y = truncate(&x, &manual);
        assert_relative_eq!(y.values()[0], -0.2);
        assert_relative_eq!(y.values()[1], 0.2);
        assert_eq!(truncation_params(&s, 0, &c, &x), Err(Error::DegenerateLog));

        let k = RandomVariable::constant(2, 3.0);
        let tk = truncation_params(&s, 5, &c, &k).unwrap();
        assert_eq!(truncate(&k, &tk).values(), k.values());
    }

    #[test]
    fn truncation_contract_tight() {
        let s = make_schedule(ScheduleKind::Kolmogorov, 1.0, 0.5, 0.1).unwrap();
        let c = CredalSet::from_weights(vec![vec![0.2, 0.3, 0.5], vec![0.6, 0.3, 0.1]]).unwrap();
        let x = RandomVariable::new(vec![-4.0, 0.5, 9.0]).unwrap();
        let r = truncation_report(&s, 3, &c, &x).unwrap();
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn elementary_bound_examples() {
        let z = elementary_exp_bound_check(0.0, 0.3).unwrap();
        assert_eq!((z.lhs, z.rhs, z.pass), (1.0, 1.0, true));
        let a = elementary_exp_bound_check(1.0, 1.0).unwrap();
        assert_relative_eq!(a.rhs, 2.0 + 1f64.exp().powi(2), epsilon = 1e-12);
        assert!(a.pass);
        let b = elementary_exp_bound_check(-2.0, 0.5).unwrap();
        assert_relative_eq!(b.rhs, 153.43, epsilon = 1e-2);
        assert!(elementary_exp_bound_check(1.0, 0.0).is_err());
        assert!(elementary_exp_bound_check(1.0, 1.5).is_err());
    }

    #[test]
    fn partial_sum_examples() {
        let k = kolmogorov();
        assert_eq!(
            normalized_partial_sums(&[1.0, 1.0], &k, &[0.0, 0.0]).unwrap(),
            vec![1.0, 1.0]
        );
        let s = normalized_partial_sums(&[1.0, 0.0, 1.0, 0.0], &k, &[0.5; 4]).unwrap();
        assert_relative_eq!(s[2], 0.5 / 3.0);
        assert_eq!((s[0], s[1], s[3]), (0.5, 0.0, 0.0));
        assert!(normalized_partial_sums(&[1.0, 2.0], &k, &[0.0]).is_err());
    }

    #[test]
    fn exp_moment_constant_and_singleton() {
        let s = kolmogorov().with_m(2.0).unwrap();
        let c = CredalSet::from_weights(vec![vec![0.3, 0.7], vec![0.7, 0.3]]).unwrap();
        let k = RandomVariable::constant(2, 1.5);
        let km = SequenceModel::rectangular(c, vec![k]).unwrap();
        for n in 1..=3 {
            assert_relative_eq!(
                exp_moment_bound(&km, &s, n, OracleLimits::default()).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
        let single = CredalSet::from_weights(vec![vec![0.3, 0.7]]).unwrap();
        let x = RandomVariable::new(vec![0.0, 1.0]).unwrap();
        let m = SequenceModel::rectangular(single, vec![x]).unwrap();
        let v = exp_moment_bound(&m, &s, 3, OracleLimits::default()).unwrap();
        let p = exp_moment_product_bound(&m, &s, 3).unwrap();
        assert_relative_eq!(v, p, max_relative = 1e-12);
    }

    #[test]
    fn summability_flat_for_kolmogorov() {
        let p = summability_profile(&kolmogorov(), 100_000);
        assert!(p.flat, "{p:?}");
    }

    #[test]
    fn schedule_spec_roundtrip() {
        let spec: ScheduleSpec =
            serde_json::from_str(r#"{"kind":"mz","p":1.25,"alpha":1,"beta":0.5,"C":1,"m":3}"#)
                .unwrap();
        let s = spec.build().unwrap();
        assert_eq!(s.normalizer, NormalizerRule::Power { p: 1.25 });
        assert_eq!(s.m, 3.0);
        let bad: ScheduleSpec =
            serde_json::from_str(r#"{"kind":"kolmogorov","alpha":1,"beta":1.5}"#).unwrap();
        assert!(matches!(bad.build(), Err(Error::BetaOutOfRange { .. })));
    }
}
