//! Negative association, vertical independence and forward factorization
//! checks over sequence models.
//!
//! All checks are empirical: the test functions are a finite ramp family,
//! so a pass means no counterexample was found in that family.

mod functions;
mod sequence;

pub use functions::{
    common_direction, default_ramp_family, ramp_family, Direction, GridSpec, MonotoneMap,
    TestFamily, TestFunction, Univariate,
};
pub use sequence::{Joint, SequenceModel};

use num_traits::Float;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expectation::joint::advance;
use crate::expectation::{
    joint_lower_expectation, joint_upper_expectation, lower_expectation, upper_expectation,
    OracleLimits,
};
use crate::model::{check_dim, CredalSet, RandomVariable};
use crate::scalar::Scalar;

/// Default slack for association and independence checks.
pub const DEFAULT_DEPENDENCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoCounterexampleFound,
    Violated,
}

/// The tuple of test functions that produced the worst gap.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    pub direction: Option<Direction>,
    /// Coordinates `0..coordinates` are involved.
    pub coordinates: usize,
    pub function_indices: Vec<usize>,
    pub functions: Vec<String>,
    pub lhs: T,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationReport<T> {
    /// Number of `(lhs, rhs)` comparisons made.
    pub checked: usize,
    /// Largest `lhs - rhs` (association) or `|lhs - rhs|` (independence).
    pub worst_gap: T,
    pub witness: Option<Witness<T>>,
    pub verdict: Verdict,
}

impl<T: Scalar> AssociationReport<T> {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::NoCounterexampleFound
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "worst_gap": self.worst_gap.to_f64_lossy(),
            "verdict": self.verdict,
            "witness": self.witness.as_ref().map(|w| json!({
                "direction": w.direction,
                "coordinates": w.coordinates,
                "function_indices": w.function_indices,
                "functions": w.functions,
                "lhs": w.lhs.to_f64_lossy(),
                "rhs": w.rhs.to_f64_lossy(),
            })),
        })
    }
}

struct Tracker<T> {
    checked: usize,
    worst: Option<(T, Witness<T>)>,
}

impl<T: Scalar> Tracker<T> {
    fn new() -> Self {
        Self {
            checked: 0,
            worst: None,
        }
    }

    fn offer(&mut self, gap: T, witness: impl FnOnce() -> Witness<T>) {
        self.checked += 1;
        let better = match &self.worst {
            None => true,
            Some((g, _)) => gap > *g,
        };
        if better {
            self.worst = Some((gap, witness()));
        }
    }

    fn finish(self, tol: &T) -> AssociationReport<T> {
        match self.worst {
            None => AssociationReport {
                checked: 0,
                worst_gap: T::zero(),
                witness: None,
                verdict: Verdict::NoCounterexampleFound,
            },
            Some((gap, w)) => AssociationReport {
                checked: self.checked,
                verdict: if gap > *tol {
                    Verdict::Violated
                } else {
                    Verdict::NoCounterexampleFound
                },
                worst_gap: gap,
                witness: Some(w),
            },
        }
    }
}

fn decode(mut idx: usize, radix: usize, len: usize, out: &mut Vec<usize>) {
    out.clear();
    for _ in 0..len {
        out.push(idx % radix);
        idx /= radix;
    }
}

/// Visits every tuple `(f_1, …, f_k)` of `fns` for `k = 2..=n`, passing the
/// joint upper expectation of `∏ f_i(X_i)` and the factorized bound
/// `𝔼[∏_{i<k} f_i(X_i)] · 𝔼[f_k(X_k)]`. The prefix term reuses the previous
/// level. Joint expectations within a level run in parallel; visits happen in
/// index order, first coordinate least significant.
fn product_sweep<T, U>(
    model: &SequenceModel<T>,
    n: usize,
    fns: &[U],
    limits: OracleLimits,
    mut visit: impl FnMut(usize, &[usize], &T, &T),
) -> Result<()>
where
    T: Scalar,
    U: Univariate<T>,
{
    model.check_horizon(n)?;
    if fns.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let radix = fns.len();
    let credal = model.credal();
    let marginals: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let x = model.coordinate(i);
            fns.iter()
                .map(|f| upper_expectation(credal, &x.map(|v| f.eval(v))))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    let Some(first) = marginals.first() else {
        return Ok(());
    };
    let mut prev = first.clone();
    let mut digits = Vec::with_capacity(n);
    for k in 1..n {
        let len = k + 1;
        let count = (radix as u128)
            .checked_pow(len as u32)
            .filter(|c| *c <= limits.max_terms);
        let Some(count) = count else {
            return Err(Error::OracleTooLarge {
                horizon: len,
                terms: (radix as u128).saturating_pow(len as u32),
                max_horizon: limits.max_horizon,
                max_terms: limits.max_terms,
            });
        };
        let count = count as usize;
        let level: Vec<T> = (0..count)
            .into_par_iter()
            .map_init(Vec::new, |buf, idx| {
                decode(idx, radix, len, buf);
                let product = |v: &[T]| {
                    buf.iter()
                        .zip(v)
                        .fold(T::one(), |acc, (&j, x)| acc * fns[j].eval(x))
                };
                joint_upper_expectation(model, product, len, limits).map(|e| e.value)
            })
            .collect::<Result<_>>()?;
        let stride = prev.len();
        for (idx, lhs) in level.iter().enumerate() {
            decode(idx, radix, len, &mut digits);
            let rhs = prev[idx % stride].clone() * marginals[k][idx / stride].clone();
            visit(len, &digits, lhs, &rhs);
        }
        prev = level;
    }
    Ok(())
}

fn witness<T: Scalar, U: Univariate<T>>(
    fns: &[U],
    direction: Option<Direction>,
    len: usize,
    digits: &[usize],
    lhs: &T,
    rhs: &T,
) -> Witness<T> {
    Witness {
        direction,
        coordinates: len,
        function_indices: digits.to_vec(),
        functions: digits.iter().map(|&j| fns[j].describe()).collect(),
        lhs: lhs.clone(),
        rhs: rhs.clone(),
    }
}

/// Sequence form of negative association over the first `n` coordinates:
/// for every split `(X_1..X_k | X_{k+1})` and every tuple of same-direction
/// ramps, `𝔼[∏_{i≤k+1} f_i(X_i)] ≤ 𝔼[∏_{i≤k} f_i(X_i)] · 𝔼[f_{k+1}(X_{k+1})]`.
/// Both `family` and its mirror are swept.
pub fn check_negative_association<T: Scalar>(
    model: &SequenceModel<T>,
    n: usize,
    family: &TestFamily<T>,
    tol: &T,
    limits: OracleLimits,
) -> Result<AssociationReport<T>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "association needs n >= 2, got {n}"
        )));
    }
    let mut tracker = Tracker::new();
    for fam in [family.clone(), family.mirrored()] {
        let fns = fam.functions();
        product_sweep(model, n, fns, limits, |len, digits, lhs, rhs| {
            tracker.offer(lhs.clone() - rhs.clone(), || {
                witness(fns, Some(fam.direction()), len, digits, lhs, rhs)
            });
        })?;
    }
    Ok(tracker.finish(tol))
}

/// Pairwise form: `𝔼[f(X_i) g(X_j)] ≤ 𝔼[f(X_i)] 𝔼[g(X_j)]` for every pair
/// `i < j < n` and every same-direction pair of ramps.
pub fn check_pairwise_negative_association<T: Scalar>(
    model: &SequenceModel<T>,
    n: usize,
    family: &TestFamily<T>,
    tol: &T,
    limits: OracleLimits,
) -> Result<AssociationReport<T>> {
    model.check_horizon(n)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "association needs n >= 2, got {n}"
        )));
    }
    let mut tracker = Tracker::new();
    for i in 0..n {
        for j in i + 1..n {
            let pair = match model.joint() {
                Joint::ComonotonePair => model.clone(),
                Joint::Rectangular => SequenceModel::rectangular(
                    model.credal().clone(),
                    vec![model.coordinate(i).clone(), model.coordinate(j).clone()],
                )?,
            };
            for fam in [family.clone(), family.mirrored()] {
                let fns = fam.functions();
                product_sweep(&pair, 2, fns, limits, |len, digits, lhs, rhs| {
                    tracker.offer(lhs.clone() - rhs.clone(), || {
                        let mut w = witness(fns, Some(fam.direction()), len, digits, lhs, rhs);
                        w.functions = vec![
                            format!("X{}: {}", i + 1, w.functions[0]),
                            format!("X{}: {}", j + 1, w.functions[1]),
                        ];
                        w
                    });
                })?;
            }
        }
    }
    Ok(tracker.finish(tol))
}

/// Checks `𝔼[∏_{i≤k+1} f_i(X_i)] = 𝔼[∏_{i≤k} f_i(X_i)] · 𝔼[f_{k+1}(X_{k+1})]`
/// for every tuple of the nonnegative `functions`. `n = 1` passes trivially.
pub fn check_vertical_independence<T: Scalar, U: Univariate<T>>(
    model: &SequenceModel<T>,
    n: usize,
    functions: &[U],
    tol: &T,
    limits: OracleLimits,
) -> Result<AssociationReport<T>> {
    model.check_horizon(n)?;
    for i in 0..n {
        for v in model.coordinate(i).values() {
            for f in functions {
                let y = f.eval(v);
                if y < T::zero() {
                    return Err(Error::NegativeFunctionValue {
                        at: v.to_f64_lossy(),
                        value: y.to_f64_lossy(),
                    });
                }
            }
        }
    }
    let mut tracker = Tracker::new();
    if n >= 2 {
        product_sweep(model, n, functions, limits, |len, digits, lhs, rhs| {
            let gap = lhs.clone() - rhs.clone();
            let gap = if gap < T::zero() { -gap } else { gap };
            tracker.offer(gap, || witness(functions, None, len, digits, lhs, rhs));
        })?;
    }
    Ok(tracker.finish(tol))
}

/// `ℰ[g(X_1, …, X_{n-1}) · (f(X_n) - ℰ[f(X_n)])]`, which is nonnegative
/// whenever the sequence factorizes forward. `g` must be nonnegative on every
/// reachable prefix.
pub fn forward_factorization_value<T, G, U>(
    model: &SequenceModel<T>,
    n: usize,
    g: G,
    f: &U,
    limits: OracleLimits,
) -> Result<T>
where
    T: Scalar,
    G: Fn(&[T]) -> T,
    U: Univariate<T>,
{
    model.check_horizon(n)?;
    if n == 0 {
        return Err(Error::InvalidParameter(
            "forward factorization needs n >= 1".into(),
        ));
    }
    check_g_nonnegative(model, n - 1, &g)?;
    let last = model.coordinate(n - 1).map(|v| f.eval(v));
    let center = lower_expectation(model.credal(), &last)?;
    let integrand = |v: &[T]| g(&v[..n - 1]) * (f.eval(&v[n - 1]) - center.clone());
    Ok(joint_lower_expectation(model, integrand, n, limits)?.value)
}

fn check_g_nonnegative<T: Scalar, G: Fn(&[T]) -> T>(
    model: &SequenceModel<T>,
    prefix: usize,
    g: &G,
) -> Result<()> {
    let size = model.credal().size();
    let fail = |args: &[T]| Error::NegativeG(args.iter().map(Scalar::to_f64_lossy).collect());
    match model.joint() {
        Joint::ComonotonePair => {
            for omega in 0..size {
                let args: Vec<T> = (0..prefix)
                    .map(|i| model.coordinate(i).values()[omega].clone())
                    .collect();
                if g(&args) < T::zero() {
                    return Err(fail(&args));
                }
            }
        }
        Joint::Rectangular => {
            let mut outcomes = vec![0usize; prefix];
            let mut args = Vec::with_capacity(prefix);
            loop {
                args.clear();
                args.extend(
                    outcomes
                        .iter()
                        .enumerate()
                        .map(|(i, &o)| model.coordinate(i).values()[o].clone()),
                );
                if g(&args) < T::zero() {
                    return Err(fail(&args));
                }
                if !advance(&mut outcomes, size) {
                    break;
                }
            }
        }
    }
    Ok(())
}

/// Two-point comonotone model: `Ω = {0, 1}`, measures `(1 - p, p)`,
/// `X = (0, 1)` and `Y = (0, -1)` on the same outcome.
pub fn binomial_pair_model<T: Scalar>(p_values: &[T]) -> Result<SequenceModel<T>> {
    if p_values.is_empty() {
        return Err(Error::Empty("p values"));
    }
    let mut weights = Vec::with_capacity(p_values.len());
    for p in p_values {
        if !(*p > T::zero() && *p < T::one()) {
            return Err(Error::POutOfRange(p.to_f64_lossy()));
        }
        weights.push(vec![T::one() - p.clone(), p.clone()]);
    }
    let credal = CredalSet::from_weights(weights)?;
    let x = RandomVariable::new(vec![T::zero(), T::one()])?;
    let y = RandomVariable::new(vec![T::zero(), -T::one()])?;
    SequenceModel::comonotone_pair(credal, x, y)?.with_names(vec!["X".into(), "Y".into()])
}

/// `ℰ[g(Y)(f(X) - ℰ f(X))]` on [`binomial_pair_model`] with the increasing
/// ramps `f = ramp(0, 1)` and `g = ramp(-1, 1)`. Equals `c² - c` for
/// `c = min p`, so it is negative although the pair is negatively associated.
pub fn binomial_pair_forward_value<T: Scalar>(p_values: &[T]) -> Result<T> {
    let model = binomial_pair_model(p_values)?.reordered(&[1, 0])?;
    let f = TestFunction::ramp(T::zero(), T::one(), Direction::Increasing)?;
    let g = TestFunction::ramp(-T::one(), T::one(), Direction::Increasing)?;
    forward_factorization_value(
        &model,
        2,
        |prefix: &[T]| g.apply(&prefix[0]),
        &f,
        OracleLimits::default(),
    )
}

/// `{f_i(X_i)}` for one map per coordinate; all non-constant maps must share
/// a direction.
pub fn monotone_image_model<T: Scalar>(
    model: &SequenceModel<T>,
    maps: &[MonotoneMap<T>],
) -> Result<SequenceModel<T>> {
    check_dim(model.len(), maps.len())?;
    common_direction(maps)?;
    Ok(model.map_variables(|i, x| x.map(|v| maps[i].apply(v))))
}

/// `∏_{i≤n} 𝔼[e^{f_i(X_i)}] - 𝔼[exp Σ_{i≤n} f_i(X_i)]` for one map per
/// coordinate.
pub fn exp_product_bound_gap<T: Scalar + Float>(
    model: &SequenceModel<T>,
    n: usize,
    maps: &[MonotoneMap<T>],
    limits: OracleLimits,
) -> Result<T> {
    check_dim(n, maps.len())?;
    common_direction(maps)?;
    let mut product = T::one();
    for (i, m) in maps.iter().enumerate() {
        let e = model.coordinate(i).map(|v| Float::exp(m.apply(v)));
        product = product * upper_expectation(model.credal(), &e)?;
    }
    let sum_exp = |v: &[T]| {
        let s = v
            .iter()
            .zip(maps)
            .fold(T::zero(), |acc, (x, m)| acc + m.apply(x));
        Float::exp(s)
    };
    let joint = joint_upper_expectation(model, sum_exp, n, limits)?.value;
    Ok(product - joint)
}

/// The default ramp family over the model's value range.
pub fn default_family<T: Scalar>(model: &SequenceModel<T>, direction: Direction) -> TestFamily<T> {
    let (lo, hi) = model.value_range();
    default_ramp_family(&lo, &hi, direction)
}
