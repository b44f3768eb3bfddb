//! Adversarial path sampling and Monte Carlo experiments for the weighted
//! strong laws.
//!
//! A strategy picks a measure from the credal set at each step, an outcome
//! is drawn from it and the coordinate's value recorded. Paths get
//! independent generator streams derived from the master seed and the path
//! index, so results do not depend on scheduling.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dependence::{Joint, SequenceModel};
use crate::error::{Error, Result};
use crate::expectation::{lower_expectation, upper_expectation};
use crate::scalar::argmax;
use crate::slln::{validate_schedule, WeightSchedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdversaryStrategy {
    /// Always measure `index`.
    Fixed { index: usize },
    /// Measure `i mod |𝒫|` at step `i` (0-based).
    Cyclic,
    /// Uniformly random measure per step.
    IidRandom { seed: u64 },
    /// The measure maximizing `E_P[X_i]`, lowest index on ties.
    DriftMax,
}

impl AdversaryStrategy {
    pub fn name(&self) -> String {
        match self {
            AdversaryStrategy::Fixed { index } => format!("fixed({index})"),
            AdversaryStrategy::Cyclic => "cyclic".into(),
            AdversaryStrategy::IidRandom { seed } => format!("iid-random({seed})"),
            AdversaryStrategy::DriftMax => "drift-max".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePath {
    pub seed: u64,
    pub choices: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub values: Vec<f64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Draws `n` steps. Only rectangular models have per-step marginals to
/// sample from.
pub fn sample_path(
    model: &SequenceModel<f64>,
    strategy: &AdversaryStrategy,
    n: usize,
    seed: u64,
) -> Result<SamplePath> {
    if model.joint() != Joint::Rectangular {
        return Err(Error::NotRectangular);
    }
    let credal = model.credal();
    let k = credal.len();
    if let AdversaryStrategy::Fixed { index } = strategy {
        if *index >= k {
            return Err(Error::BadStrategyParam(format!(
                "fixed index {index} with {k} measures"
            )));
        }
    }
    let samplers: Vec<WeightedIndex<f64>> = credal
        .measures()
        .iter()
        .map(|p| WeightedIndex::new(p.weights()).expect("measures are normalized"))
        .collect();
    // Drift-max choices depend only on the coordinate's variable.
    let drift: Vec<usize> = match strategy {
        AdversaryStrategy::DriftMax => model
            .variables()
            .iter()
            .map(|x| {
                let means = credal
                    .measures()
                    .iter()
                    .map(|p| p.expectation(x).expect("checked"));
                argmax(means).expect("nonempty").0
            })
            .collect(),
        _ => Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut choice_rng = match strategy {
        AdversaryStrategy::IidRandom { seed: s } => {
            Some(ChaCha8Rng::seed_from_u64(derive_seed(*s, seed)))
        }
        _ => None,
    };

    let mut path = SamplePath {
        seed,
        choices: Vec::with_capacity(n),
        outcomes: Vec::with_capacity(n),
        values: Vec::with_capacity(n),
    };
    for i in 0..n {
        let j = match strategy {
            AdversaryStrategy::Fixed { index } => *index,
            AdversaryStrategy::Cyclic => i % k,
            AdversaryStrategy::IidRandom { .. } => {
                choice_rng.as_mut().expect("set above").gen_range(0..k)
            }
            AdversaryStrategy::DriftMax => drift[i % model.len()],
        };
        let omega = samplers[j].sample(&mut rng);
        path.choices.push(j);
        path.outcomes.push(omega);
        path.values.push(model.coordinate(i).values()[omega]);
    }
    Ok(path)
}

/// Continuous transforms with a computable `sup_{x≤0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Phi {
    Identity,
    Affine {
        slope: f64,
        intercept: f64,
    },
    /// `exp(rate·x)`
    Exp {
        rate: f64,
    },
    Clamp {
        lo: f64,
        hi: f64,
    },
    /// `Σ_k coefficients[k]·x^k`
    Polynomial {
        coefficients: Vec<f64>,
    },
    /// `max_k (slope_k·x + intercept_k)`, pieces as `[slope, intercept]`
    MaxAffine {
        pieces: Vec<[f64; 2]>,
    },
    Abs,
}

impl Phi {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Phi::Identity => x,
            Phi::Affine { slope, intercept } => slope * x + intercept,
            Phi::Exp { rate } => (rate * x).exp(),
            Phi::Clamp { lo, hi } => x.max(*lo).min(*hi),
            Phi::Polynomial { coefficients } => horner(coefficients, x),
            Phi::MaxAffine { pieces } => pieces
                .iter()
                .map(|[s, b]| s * x + b)
                .fold(f64::NEG_INFINITY, f64::max),
            Phi::Abs => x.abs(),
        }
    }

    /// `sup_{x≤0} φ(x)`.
    pub fn sup_nonpositive(&self) -> Result<f64> {
        let unbounded = || Err(Error::UnboundedPhi(format!("{self:?}")));
        match self {
            Phi::Identity => Ok(0.0),
            Phi::Affine { slope, intercept } => {
                if *slope < 0.0 {
                    unbounded()
                } else {
                    Ok(*intercept)
                }
            }
            Phi::Exp { rate } => {
                if *rate < 0.0 {
                    unbounded()
                } else {
                    Ok(1.0)
                }
            }
            Phi::Clamp { lo, hi } => {
                if lo > hi {
                    return Err(Error::InvalidParameter(format!("clamp lo {lo} > hi {hi}")));
                }
                Ok(0f64.max(*lo).min(*hi))
            }
            Phi::Polynomial { coefficients } => {
                polynomial_sup_nonpositive(coefficients).map_or_else(unbounded, Ok)
            }
            Phi::MaxAffine { pieces } => {
                if pieces.is_empty() {
                    return Err(Error::InvalidParameter("max-affine needs pieces".into()));
                }
                if pieces.iter().any(|p| p[0] < 0.0) {
                    unbounded()
                } else {
                    Ok(pieces
                        .iter()
                        .map(|p| p[1])
                        .fold(f64::NEG_INFINITY, f64::max))
                }
            }
            Phi::Abs => unbounded(),
        }
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

// None when the polynomial grows to +∞ as x → -∞.
fn polynomial_sup_nonpositive(c: &[f64]) -> Option<f64> {
    let Some(deg) = c.iter().rposition(|k| *k != 0.0) else {
        return Some(0.0);
    };
    let lead = c[deg];
    if deg > 0 && lead * if deg % 2 == 0 { 1.0 } else { -1.0 } > 0.0 {
        return None;
    }
    let mut best = c[0];
    if deg >= 2 {
        // Local maxima of φ lie where φ' changes sign from + to -; all
        // critical points sit inside the Cauchy bound of φ'.
        let deriv: Vec<f64> = (1..=deg).map(|k| k as f64 * c[k]).collect();
        let dl = deriv[deg - 1];
        let radius = 1.0
            + deriv[..deg - 1]
                .iter()
                .map(|k| (k / dl).abs())
                .fold(0.0, f64::max);
        let steps = 20_000;
        let h = radius / steps as f64;
        let mut x0 = -radius;
        let mut d0 = horner(&deriv, x0);
        for s in 1..=steps {
            let x1 = -radius + s as f64 * h;
            let d1 = horner(&deriv, x1);
            if d0 > 0.0 && d1 <= 0.0 {
                let (mut a, mut b) = (x0, x1);
                for _ in 0..60 {
                    let mid = 0.5 * (a + b);
                    if horner(&deriv, mid) > 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                best = best.max(horner(c, 0.5 * (a + b)));
            }
            x0 = x1;
            d0 = d1;
        }
    }
    Some(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrassenValue {
    /// `sup_{n≥n0} φ(S_n)`
    pub sup: f64,
    /// `sup_{x≤0} φ(x)`
    pub bound: f64,
}

/// `n0` is 1-based.
pub fn strassen_evaluate(trajectory: &[f64], phi: &Phi, n0: usize) -> Result<StrassenValue> {
    if n0 == 0 || n0 > trajectory.len() {
        return Err(Error::InvalidParameter(format!(
            "n0 = {n0} outside a trajectory of length {}",
            trajectory.len()
        )));
    }
    let bound = phi.sup_nonpositive()?;
    let sup = trajectory[n0 - 1..]
        .iter()
        .map(|s| phi.eval(*s))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StrassenValue { sup, bound })
}

/// Parameters of [`run_slln_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub strategies: Vec<AdversaryStrategy>,
    pub paths_per_strategy: usize,
    pub horizon: usize,
    pub n0: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// Transforms evaluated on each upper-centered trajectory.
    #[serde(default)]
    pub phis: Vec<Phi>,
    /// Points per decade of the recorded trajectory grid; 0 records nothing.
    #[serde(default = "default_grid_density")]
    pub grid_per_decade: usize,
}

fn default_grid_density() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSummary {
    pub path_id: usize,
    pub strategy: String,
    pub seed: u64,
    pub final_upper: f64,
    pub final_lower: f64,
    /// Extremes over `n ≥ n0`.
    pub max_upper: f64,
    pub min_upper: f64,
    pub max_lower: f64,
    pub min_lower: f64,
    /// Max over `n ≥ n0` of the upper trajectory recentered by `ℰ[X_i]`.
    pub max_swapped: f64,
    /// Whether every running mean over `n ≥ n0` stays in `[min X, max X]`.
    pub sandwich: bool,
    pub strassen: Vec<StrassenValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub strategy: String,
    pub paths: usize,
    /// Fraction with `max_{n≥n0} S_n^upper > ε`.
    pub upper_exceedance: f64,
    /// Fraction with `min_{n≥n0} S_n^lower < -ε`.
    pub lower_undershoot: f64,
    /// Fraction with the swapped-center maximum above `ε`.
    pub swapped_exceedance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub path_id: usize,
    pub strategy: String,
    pub n: usize,
    pub s_upper: f64,
    pub s_lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub schedule: WeightSchedule,
    pub paths: Vec<PathSummary>,
    /// One entry per strategy, then the overall entry named `"all"`.
    pub aggregates: Vec<Aggregate>,
    #[serde(skip)]
    pub trajectories: Vec<TrajectoryRow>,
}

impl ExperimentResult {
    pub fn overall(&self) -> &Aggregate {
        self.aggregates.last().expect("overall aggregate")
    }
}

/// Approximately geometric grid with `per_decade` points per decade, always
/// containing 1 and `horizon`.
pub fn geometric_grid(horizon: usize, per_decade: usize) -> Vec<usize> {
    if per_decade == 0 || horizon == 0 {
        return Vec::new();
    }
    let mut grid = Vec::new();
    let mut k = 0u32;
    loop {
        let n = 10f64.powf(k as f64 / per_decade as f64).round() as usize;
        if n >= horizon {
            break;
        }
        if grid.last() != Some(&n) {
            grid.push(n);
        }
        k += 1;
    }
    grid.push(horizon);
    grid
}

struct PathOutput {
    summary: PathSummary,
    rows: Vec<TrajectoryRow>,
}

pub fn run_slln_experiment(
    model: &SequenceModel<f64>,
    schedule: &WeightSchedule,
    spec: &ExperimentSpec,
) -> Result<ExperimentResult> {
    let report = validate_schedule(schedule, spec.horizon.max(100))?;
    if !report.pass {
        return Err(Error::ScheduleInvalid(format!("{report:?}")));
    }
    if !(spec.epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {}",
            spec.epsilon
        )));
    }
    if spec.n0 < 100 || spec.n0 >= spec.horizon {
        return Err(Error::InvalidParameter(format!(
            "need 100 <= n0 < N, got n0 = {} and N = {}",
            spec.n0, spec.horizon
        )));
    }
    if spec.strategies.is_empty() || spec.paths_per_strategy == 0 {
        return Err(Error::InvalidParameter(
            "experiment needs strategies and paths".into(),
        ));
    }
    for phi in &spec.phis {
        phi.sup_nonpositive()?;
    }
    let credal = model.credal();
    let upper: Vec<f64> = model
        .variables()
        .iter()
        .map(|x| upper_expectation(credal, x))
        .collect::<Result<_>>()?;
    let lower: Vec<f64> = model
        .variables()
        .iter()
        .map(|x| lower_expectation(credal, x))
        .collect::<Result<_>>()?;
    if upper.iter().zip(&lower).any(|(u, l)| l > u) {
        return Err(Error::InvariantViolation(
            "lower center above upper center".into(),
        ));
    }
    let (lo, hi) = model.value_range();
    let a: Vec<f64> = (1..=spec.horizon).map(|i| schedule.a(i)).collect();
    let big_a: Vec<f64> = (1..=spec.horizon).map(|i| schedule.big_a(i)).collect();
    let grid = geometric_grid(spec.horizon, spec.grid_per_decade);
    let period = model.len();

    let total = spec.strategies.len() * spec.paths_per_strategy;
    let outputs: Vec<PathOutput> = (0..total)
        .into_par_iter()
        .map(|path_id| {
            let strategy = &spec.strategies[path_id / spec.paths_per_strategy];
            let seed = derive_seed(spec.seed, path_id as u64);
            let path = sample_path(model, strategy, spec.horizon, seed)?;
            let mut su = 0.0;
            let mut sl = 0.0;
            let mut sum = 0.0;
            let mut summary = PathSummary {
                path_id,
                strategy: strategy.name(),
                seed,
                final_upper: 0.0,
                final_lower: 0.0,
                max_upper: f64::NEG_INFINITY,
                min_upper: f64::INFINITY,
                max_lower: f64::NEG_INFINITY,
                min_lower: f64::INFINITY,
                max_swapped: f64::NEG_INFINITY,
                sandwich: true,
                strassen: Vec::new(),
            };
            let mut sups = vec![f64::NEG_INFINITY; spec.phis.len()];
            let mut rows = Vec::with_capacity(grid.len());
            let mut next = 0;
            for (k, x) in path.values.iter().enumerate() {
                let n = k + 1;
                let c = k % period;
                su += a[k] * (x - upper[c]);
                sl += a[k] * (x - lower[c]);
                sum += x;
                let s_upper = su / big_a[k];
                let s_lower = sl / big_a[k];
                if s_upper > s_lower + 1e-9 * (1.0 + s_lower.abs()) {
                    return Err(Error::InvariantViolation(format!(
                        "upper-centered sum {s_upper} above lower-centered {s_lower} at n = {n}"
                    )));
                }
                if n >= spec.n0 {
                    summary.max_upper = summary.max_upper.max(s_upper);
                    summary.min_upper = summary.min_upper.min(s_upper);
                    summary.max_lower = summary.max_lower.max(s_lower);
                    summary.min_lower = summary.min_lower.min(s_lower);
                    summary.max_swapped = summary.max_swapped.max(s_lower);
                    let mean = sum / n as f64;
                    summary.sandwich &= mean >= lo - 1e-9 && mean <= hi + 1e-9;
                    for (s, phi) in sups.iter_mut().zip(&spec.phis) {
                        *s = s.max(phi.eval(s_upper));
                    }
                }
                if grid.get(next) == Some(&n) {
                    rows.push(TrajectoryRow {
                        path_id,
                        strategy: summary.strategy.clone(),
                        n,
                        s_upper,
                        s_lower,
                    });
                    next += 1;
                }
                if n == spec.horizon {
                    summary.final_upper = s_upper;
                    summary.final_lower = s_lower;
                }
            }
            summary.strassen = sups
                .into_iter()
                .zip(&spec.phis)
                .map(|(sup, phi)| StrassenValue {
                    sup,
                    bound: phi.sup_nonpositive().expect("checked above"),
                })
                .collect();
            Ok(PathOutput { summary, rows })
        })
        .collect::<Result<_>>()?;

    let mut paths = Vec::with_capacity(total);
    let mut trajectories = Vec::new();
    for o in outputs {
        paths.push(o.summary);
        trajectories.extend(o.rows);
    }
    let eps = spec.epsilon;
    let aggregate = |name: String, group: &[PathSummary]| {
        let frac = |pred: &dyn Fn(&PathSummary) -> bool| {
            group.iter().filter(|p| pred(p)).count() as f64 / group.len() as f64
        };
        Aggregate {
            strategy: name,
            paths: group.len(),
            upper_exceedance: frac(&|p| p.max_upper > eps),
            lower_undershoot: frac(&|p| p.min_lower < -eps),
            swapped_exceedance: frac(&|p| p.max_swapped > eps),
        }
    };
    let mut aggregates: Vec<Aggregate> = paths
        .chunks(spec.paths_per_strategy)
        .map(|g| aggregate(g[0].strategy.clone(), g))
        .collect();
    aggregates.push(aggregate("all".into(), &paths));
    Ok(ExperimentResult {
        spec: spec.clone(),
        schedule: schedule.clone(),
        paths,
        aggregates,
        trajectories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CredalSet, RandomVariable};
    use crate::slln::{make_schedule, ScheduleKind};

    fn pair_marginal() -> SequenceModel<f64> {
        let c = CredalSet::from_weights(vec![vec![0.7, 0.3], vec![0.3, 0.7]]).unwrap();
        let x = RandomVariable::new(vec![0.0, 1.0]).unwrap();
        SequenceModel::rectangular(c, vec![x]).unwrap()
    }

    #[test]
    fn replayable_paths() {
        let m = pair_marginal();
        for s in [
            AdversaryStrategy::Fixed { index: 1 },
            AdversaryStrategy::Cyclic,
            AdversaryStrategy::IidRandom { seed: 9 },
            AdversaryStrategy::DriftMax,
        ] {
            let a = sample_path(&m, &s, 500, 42).unwrap();
            let b = sample_path(&m, &s, 500, 42).unwrap();
            assert_eq!(a, b);
        }
        let d = sample_path(&m, &AdversaryStrategy::DriftMax, 10, 1).unwrap();
        assert!(d.choices.iter().all(|&j| j == 1));
        let c = sample_path(&m, &AdversaryStrategy::Cyclic, 4, 1).unwrap();
        assert_eq!(c.choices, vec![0, 1, 0, 1]);
        assert!(matches!(
            sample_path(&m, &AdversaryStrategy::Fixed { index: 2 }, 4, 1),
            Err(Error::BadStrategyParam(_))
        ));
    }

    #[test]
    fn dirac_path_is_constant() {
        let c = CredalSet::from_weights(vec![vec![0.0, 1.0, 0.0]]).unwrap();
        let x = RandomVariable::new(vec![5.0, -2.0, 7.0]).unwrap();
        let m = SequenceModel::rectangular(c, vec![x]).unwrap();
        let p = sample_path(&m, &AdversaryStrategy::Cyclic, 100, 3).unwrap();
        assert!(p.values.iter().all(|v| *v == -2.0));
    }

    #[test]
    fn comonotone_models_are_rejected() {
        let c = CredalSet::from_weights(vec![vec![0.5, 0.5]]).unwrap();
        let x = RandomVariable::new(vec![0.0, 1.0]).unwrap();
        let m = SequenceModel::comonotone_pair(c, x.clone(), x).unwrap();
        assert_eq!(
            sample_path(&m, &AdversaryStrategy::Cyclic, 3, 0),
            Err(Error::NotRectangular)
        );
    }

    #[test]
    fn phi_bounds() {
        assert_eq!(Phi::Identity.sup_nonpositive().unwrap(), 0.0);
        assert_eq!(Phi::Exp { rate: 1.0 }.sup_nonpositive().unwrap(), 1.0);
        assert!(matches!(
            Phi::Abs.sup_nonpositive(),
            Err(Error::UnboundedPhi(_))
        ));
        assert_eq!(
            Phi::Clamp { lo: -1.0, hi: -0.5 }.sup_nonpositive().unwrap(),
            -0.5
        );
        // -x² - 2x has its maximum 1 at x = -1.
        let q = Phi::Polynomial {
            coefficients: vec![0.0, -2.0, -1.0],
        };
        assert!((q.sup_nonpositive().unwrap() - 1.0).abs() < 1e-9);
        // x² is unbounded on (-∞, 0].
        let sq = Phi::Polynomial {
            coefficients: vec![0.0, 0.0, 1.0],
        };
        assert!(sq.sup_nonpositive().is_err());
        // x³ tends to -∞; sup at 0.
        let cube = Phi::Polynomial {
            coefficients: vec![0.5, 0.0, 0.0, 1.0],
        };
        assert_eq!(cube.sup_nonpositive().unwrap(), 0.5);
        let ma = Phi::MaxAffine {
            pieces: vec![[0.0, -1.0], [1.0, 0.5]],
        };
        assert_eq!(ma.sup_nonpositive().unwrap(), 0.5);
    }

    #[test]
    fn strassen_identity_is_max() {
        let t = [0.3, -0.1, 0.2, -0.4];
        let v = strassen_evaluate(&t, &Phi::Identity, 2).unwrap();
        assert_eq!((v.sup, v.bound), (0.2, 0.0));
        assert!(strassen_evaluate(&t, &Phi::Identity, 5).is_err());
    }

    #[test]
    fn grid_shape() {
        assert_eq!(geometric_grid(100, 2), vec![1, 3, 10, 32, 100]);
        assert!(geometric_grid(100, 0).is_empty());
    }

    #[test]
    fn constant_experiment_is_flat() {
        let c = CredalSet::from_weights(vec![vec![0.5, 0.5]]).unwrap();
        let m = SequenceModel::rectangular(c, vec![RandomVariable::constant(2, 2.0)]).unwrap();
        let s = make_schedule(ScheduleKind::Kolmogorov, 1.0, 0.5, 1.0).unwrap();
        let spec = ExperimentSpec {
            strategies: vec![AdversaryStrategy::Cyclic],
            paths_per_strategy: 3,
            horizon: 1000,
            n0: 100,
            epsilon: 0.05,
            seed: 1,
            phis: vec![Phi::Identity],
            grid_per_decade: 1,
        };
        let r = run_slln_experiment(&m, &s, &spec).unwrap();
        assert!(r
            .paths
            .iter()
            .all(|p| p.max_upper == 0.0 && p.min_lower == 0.0));
        assert_eq!(r.overall().upper_exceedance, 0.0);
        assert_eq!(r.trajectories.len(), 3 * 4);
    }
}
