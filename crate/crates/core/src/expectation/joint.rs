//! Brute-force joint expectations over a [`SequenceModel`].
//!
//! Under the rectangular semantics the joint upper expectation of
//! `F(X_1, …, X_n)` is the maximum, over all per-coordinate measure choices
//! `(j_1, …, j_n)`, of the product-measure expectation. Everything is
//! enumerated; the limits keep that honest.

use crate::dependence::{Joint, SequenceModel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Enumeration budget of the joint oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_horizon: usize,
    /// Cap on `Σ_assignments Σ_outcomes` terms.
    pub max_terms: u128,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_horizon: 6,
            max_terms: 50_000_000,
        }
    }
}

/// An extreme joint expectation and the measure index chosen per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct JointExtremum<T> {
    pub value: T,
    pub assignment: Vec<usize>,
}

/// `𝔼[F(X_1, …, X_n)]` together with the maximizing assignment.
pub fn joint_upper_expectation<T, F>(
    model: &SequenceModel<T>,
    f: F,
    n: usize,
    limits: OracleLimits,
) -> Result<JointExtremum<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    extremum(model, &f, n, limits, true)
}

/// `ℰ[F(X_1, …, X_n)]` together with the minimizing assignment.
pub fn joint_lower_expectation<T, F>(
    model: &SequenceModel<T>,
    f: F,
    n: usize,
    limits: OracleLimits,
) -> Result<JointExtremum<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    extremum(model, &f, n, limits, false)
}

fn extremum<T, F>(
    model: &SequenceModel<T>,
    f: &F,
    n: usize,
    limits: OracleLimits,
    upper: bool,
) -> Result<JointExtremum<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    model.check_horizon(n)?;
    let measures = model.credal().len();
    let outcomes = model.credal().size();
    let terms = match model.joint() {
        Joint::Rectangular => ((measures * outcomes) as u128).checked_pow(n as u32),
        Joint::ComonotonePair => Some((measures * outcomes) as u128),
    };
    let too_large = |terms: u128| Error::OracleTooLarge {
        horizon: n,
        terms,
        max_horizon: limits.max_horizon,
        max_terms: limits.max_terms,
    };
    let terms = terms.ok_or_else(|| too_large(u128::MAX))?;
    if n > limits.max_horizon || terms > limits.max_terms {
        return Err(too_large(terms));
    }
    if n == 0 {
        return Ok(JointExtremum {
            value: f(&[]),
            assignment: Vec::new(),
        });
    }

    let mut best: Option<JointExtremum<T>> = None;
    let mut consider = |value: T, assignment: &[usize]| {
        let better = match &best {
            None => true,
            Some(b) if upper => value > b.value,
            Some(b) => value < b.value,
        };
        if better {
            best = Some(JointExtremum {
                value,
                assignment: assignment.to_vec(),
            });
        }
    };

    match model.joint() {
        Joint::ComonotonePair => {
            let mut args = Vec::with_capacity(n);
            for (j, p) in model.credal().measures().iter().enumerate() {
                let mut acc = T::zero();
                for (w, omega) in p.weights().iter().zip(0..outcomes) {
                    if w.is_zero() {
                        continue;
                    }
                    args.clear();
                    args.extend((0..n).map(|i| model.coordinate(i).values()[omega].clone()));
                    acc = acc + w.clone() * f(&args);
                }
                consider(acc, &vec![j; n]);
            }
        }
        Joint::Rectangular => {
            let mut assignment = vec![0usize; n];
            let mut args: Vec<T> = Vec::with_capacity(n);
            loop {
                args.clear();
                let value = product_expectation(model, f, &assignment, 0, T::one(), &mut args);
                consider(value, &assignment);
                if !advance(&mut assignment, measures) {
                    break;
                }
            }
        }
    }
    Ok(best.expect("at least one assignment"))
}

// Depth-first sum over Ω^n of ∏ P_{j_i}(ω_i) · F(values); zero-weight
// branches are pruned exactly.
fn product_expectation<T, F>(
    model: &SequenceModel<T>,
    f: &F,
    assignment: &[usize],
    depth: usize,
    weight: T,
    args: &mut Vec<T>,
) -> T
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    if depth == assignment.len() {
        return weight * f(args);
    }
    let p = &model.credal().measures()[assignment[depth]];
    let x = model.coordinate(depth);
    let mut acc = T::zero();
    for (w, v) in p.weights().iter().zip(x.values()) {
        if w.is_zero() {
            continue;
        }
        args.push(v.clone());
        acc = acc
            + product_expectation(
                model,
                f,
                assignment,
                depth + 1,
                weight.clone() * w.clone(),
                args,
            );
        args.pop();
    }
    acc
}

/// Mixed-radix increment; `false` after the last combination.
pub(crate) fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}
