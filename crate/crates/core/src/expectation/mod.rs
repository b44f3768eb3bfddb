//! Sublinear upper/lower expectations, discrete Choquet integrals and the
//! ordering `C_v ≤ ℰ ≤ 𝔼 ≤ C_V` between them.

mod choquet;
mod inequality;
pub(crate) mod joint;

pub use choquet::{choquet_expectation, Side};
pub use inequality::{inequality_suite, InequalityInputs, ScalarFn};
pub use joint::{joint_lower_expectation, joint_upper_expectation, JointExtremum, OracleLimits};

use serde_json::json;

use crate::capacity::{upper_prob, Extremum};
use crate::error::{Error, Result};
use crate::model::{classical_expectation, CredalSet, Event, RandomVariable};
use crate::report::{Check, Report};
use crate::scalar::{argmax, argmin, Scalar};

fn expectations<T: Scalar>(credal: &CredalSet<T>, x: &RandomVariable<T>) -> Result<Vec<T>> {
    credal.check_variable(x)?;
    credal
        .measures()
        .iter()
        .map(|p| classical_expectation(p, x))
        .collect()
}

/// `𝔼[X] = max_P E_P[X]` with the maximizing measure.
pub fn upper_expectation_witness<T: Scalar>(
    credal: &CredalSet<T>,
    x: &RandomVariable<T>,
) -> Result<Extremum<T>> {
    let (measure, value) = argmax(expectations(credal, x)?).expect("credal sets are nonempty");
    Ok(Extremum { value, measure })
}

/// `ℰ[X] = min_P E_P[X]` with the minimizing measure.
pub fn lower_expectation_witness<T: Scalar>(
    credal: &CredalSet<T>,
    x: &RandomVariable<T>,
) -> Result<Extremum<T>> {
    let (measure, value) = argmin(expectations(credal, x)?).expect("credal sets are nonempty");
    Ok(Extremum { value, measure })
}

pub fn upper_expectation<T: Scalar>(credal: &CredalSet<T>, x: &RandomVariable<T>) -> Result<T> {
    Ok(upper_expectation_witness(credal, x)?.value)
}

pub fn lower_expectation<T: Scalar>(credal: &CredalSet<T>, x: &RandomVariable<T>) -> Result<T> {
    Ok(lower_expectation_witness(credal, x)?.value)
}

/// The four expectations of one random variable, ordered
/// `choquet_lower ≤ lower ≤ upper ≤ choquet_upper`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExpectationBounds<T> {
    pub choquet_lower: T,
    pub lower: T,
    pub upper: T,
    pub choquet_upper: T,
}

impl<T: Scalar> ExpectationBounds<T> {
    pub fn as_array(&self) -> [T; 4] {
        [
            self.choquet_lower.clone(),
            self.lower.clone(),
            self.upper.clone(),
            self.choquet_upper.clone(),
        ]
    }
}

/// Computes all four expectations and enforces their ordering. A
/// [`Error::ChainViolation`] means an arithmetic bug, never bad input.
pub fn expectation_chain<T: Scalar>(
    credal: &CredalSet<T>,
    x: &RandomVariable<T>,
) -> Result<ExpectationBounds<T>> {
    let bounds = ExpectationBounds {
        choquet_lower: choquet_expectation(credal, x, Side::Lower)?,
        lower: lower_expectation(credal, x)?,
        upper: upper_expectation(credal, x)?,
        choquet_upper: choquet_expectation(credal, x, Side::Upper)?,
    };
    let tol = chain_tolerance(x);
    let values = bounds.as_array();
    for (k, w) in values.windows(2).enumerate() {
        if w[0].clone() - w[1].clone() > tol {
            return Err(Error::ChainViolation(format!(
                "link {k}: {:?} > {:?}",
                w[0], w[1]
            )));
        }
    }
    Ok(bounds)
}

// Absolute 1e-12 for values of unit scale, widened proportionally for large
// ranges so the ordering check tracks relative rounding.
fn chain_tolerance<T: Scalar>(x: &RandomVariable<T>) -> T {
    let scale = x.max().abs() + x.min().abs();
    if scale > T::one() {
        T::tolerance() * scale
    } else {
        T::tolerance()
    }
}

/// Inputs for [`sublinear_axiom_report`].
#[derive(Debug, Clone)]
pub struct SublinearInputs<'a, T> {
    pub x: &'a RandomVariable<T>,
    pub y: &'a RandomVariable<T>,
    /// Nonnegative scale for positive homogeneity.
    pub lambda: T,
    /// Constant for translation.
    pub c: T,
    /// Signed scale for `𝔼[aX] = a⁺𝔼[X] + a⁻𝔼[-X]`.
    pub a: T,
}

/// Checks the sublinear-expectation axioms and their consequences on one
/// instance: monotonicity (when `X ≥ Y` pointwise), constant preservation,
/// sub-additivity, positive and signed homogeneity, translation, the
/// difference bound `𝔼[X] - 𝔼[Y] ≤ 𝔼[X - Y]`, and conjugacy `ℰ[X] = -𝔼[-X]`.
pub fn sublinear_axiom_report<T: Scalar>(
    credal: &CredalSet<T>,
    inputs: &SublinearInputs<'_, T>,
) -> Result<Report> {
    let SublinearInputs { x, y, lambda, c, a } = inputs;
    if *lambda < T::zero() {
        return Err(Error::InvalidParameter("lambda must be nonnegative".into()));
    }
    credal.check_variable(x)?;
    credal.check_variable(y)?;
    let e = |v: &RandomVariable<T>| upper_expectation(credal, v);
    let tol = T::tolerance();
    let scale = x.max().abs() + x.min().abs() + y.max().abs() + y.min().abs() + c.abs();
    let tol = if scale > T::one() { tol * scale } else { tol };
    let size = credal.size();
    let mut r = Report::new();

    let ex = e(x)?;
    let ey = e(y)?;
    let e_neg_x = e(&x.neg())?;

    if x.dominates(y) {
        r.record(Check::at_least("monotonicity", &ex, &ey, &tol));
    } else if y.dominates(x) {
        r.record(Check::at_least("monotonicity", &ey, &ex, &tol));
    }
    let constant = RandomVariable::constant(size, c.clone());
    r.record(Check::equal("constant_preserving", &e(&constant)?, c, &tol));
    r.record(Check::at_most(
        "sub_additivity",
        &e(&x.add(y)?)?,
        &(ex.clone() + ey.clone()),
        &tol,
    ));
    r.record(Check::equal(
        "positive_homogeneity",
        &e(&x.scale(lambda))?,
        &(lambda.clone() * ex.clone()),
        &tol,
    ));
    let (a_pos, a_neg) = if *a >= T::zero() {
        (a.clone(), T::zero())
    } else {
        (T::zero(), -a.clone())
    };
    r.record(
        Check::equal(
            "signed_homogeneity",
            &e(&x.scale(a))?,
            &(a_pos * ex.clone() + a_neg * e_neg_x.clone()),
            &tol,
        )
        .with_witness(json!({ "a": a.to_f64_lossy() })),
    );
    r.record(Check::equal(
        "translation",
        &e(&x.shift(c))?,
        &(ex.clone() + c.clone()),
        &tol,
    ));
    r.record(Check::at_most(
        "difference_bound",
        &(ex.clone() - ey),
        &e(&x.sub(y)?)?,
        &tol,
    ));
    r.record(Check::equal(
        "conjugacy",
        &lower_expectation(credal, x)?,
        &(-e_neg_x),
        &tol,
    ));
    r.record(Check::at_least(
        "upper_dominates_lower",
        &ex,
        &lower_expectation(credal, x)?,
        &tol,
    ));
    Ok(r)
}

/// Output of [`borel_cantelli_tail`].
#[derive(Debug, Clone, PartialEq)]
pub struct BorelCantelli<T> {
    /// `Σ_n V(A_n)` over the whole list.
    pub series_sum: T,
    /// `Σ_{n ≥ m} V(A_n)`, the sub-additive bound on the tail union.
    pub tail_bound: T,
    /// `V(∪_{n ≥ m} A_n)`, computed exactly.
    pub tail_union: T,
}

/// Series and tail quantities of a finite event sequence; `start` is the
/// 1-based index `m` of the tail.
pub fn borel_cantelli_tail<T: Scalar>(
    credal: &CredalSet<T>,
    events: &[Event],
    start: usize,
) -> Result<BorelCantelli<T>> {
    if start == 0 || start > events.len() {
        return Err(Error::IndexOutOfRange {
            index: start,
            size: events.len(),
        });
    }
    let uppers: Vec<T> = events
        .iter()
        .map(|a| upper_prob(credal, a))
        .collect::<Result<_>>()?;
    let series_sum = uppers.iter().fold(T::zero(), |s, v| s + v.clone());
    let tail_bound = uppers[start - 1..]
        .iter()
        .fold(T::zero(), |s, v| s + v.clone());
    let mut union = Event::empty(credal.size());
    for a in &events[start - 1..] {
        union = union.union(a)?;
    }
    Ok(BorelCantelli {
        series_sum,
        tail_bound,
        tail_union: upper_prob(credal, &union)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn two_point() -> CredalSet<f64> {
        CredalSet::from_weights(vec![vec![0.5, 0.5], vec![0.8, 0.2]]).unwrap()
    }

    fn rv(v: &[f64]) -> RandomVariable<f64> {
        RandomVariable::new(v.to_vec()).unwrap()
    }

    #[test]
    fn upper_lower_examples() {
        let c = two_point();
        let x = rv(&[0.0, 1.0]);
        assert_eq!(upper_expectation(&c, &x).unwrap(), 0.5);
        assert_eq!(lower_expectation(&c, &x).unwrap(), 0.2);
        let k = RandomVariable::constant(2, -4.5);
        assert_eq!(upper_expectation(&c, &k).unwrap(), -4.5);
        assert_eq!(lower_expectation(&c, &k).unwrap(), -4.5);
        assert_eq!(upper_expectation_witness(&c, &x).unwrap().measure, 0);
        assert_eq!(lower_expectation_witness(&c, &x).unwrap().measure, 1);
        assert!(upper_expectation(&c, &rv(&[1.0])).is_err());
    }

    #[test]
    fn singleton_equals_classical() {
        let c = CredalSet::from_weights(vec![vec![0.25, 0.75]]).unwrap();
        let x = rv(&[2.0, 6.0]);
        let p = &c.measures()[0];
        assert_eq!(
            upper_expectation(&c, &x).unwrap(),
            p.expectation(&x).unwrap()
        );
        let b = expectation_chain(&c, &x).unwrap();
        assert_eq!(b.as_array(), [5.0; 4]);
    }

    #[test]
    fn chain_fixtures() {
        let c = CredalSet::from_weights(vec![vec![0.5, 0.0, 0.5], vec![0.0, 1.0, 0.0]]).unwrap();
        let b = expectation_chain(&c, &rv(&[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(b.as_array(), [0.5, 1.0, 1.0, 1.5]);

        let b = expectation_chain(&two_point(), &rv(&[0.0, 1.0])).unwrap();
        assert_eq!(b.as_array(), [0.2, 0.2, 0.5, 0.5]);
    }

    #[test]
    fn chain_is_exact_over_rationals() {
        let c: CredalSet<BigRational> = CredalSet::from_weights(vec![
            vec![ratio(1, 2), ratio(0, 1), ratio(1, 2)],
            vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)],
        ])
        .unwrap();
        let x = RandomVariable::new(vec![ratio(0, 1), ratio(1, 1), ratio(2, 1)]).unwrap();
        let b = expectation_chain(&c, &x).unwrap();
        assert_eq!(
            b.as_array(),
            [ratio(1, 2), ratio(1, 1), ratio(1, 1), ratio(3, 2)]
        );
    }

    #[test]
    fn sublinear_examples() {
        let c = two_point();
        let x = rv(&[0.0, 1.0]);
        let y = rv(&[0.3, -0.2]);
        for (a, lambda, cst) in [(-1.0, 0.0, 3.0), (2.5, 1.5, -1.0)] {
            let r = sublinear_axiom_report(
                &c,
                &SublinearInputs {
                    x: &x,
                    y: &y,
                    lambda,
                    c: cst,
                    a,
                },
            )
            .unwrap();
            assert!(r.all_pass(), "{r:?}");
        }
        // 𝔼[-X] = -0.2 = 0·𝔼[X] + 1·𝔼[-X]
        assert_eq!(upper_expectation(&c, &x.neg()).unwrap(), -0.2);
        let bad = sublinear_axiom_report(
            &c,
            &SublinearInputs {
                x: &x,
                y: &y,
                lambda: -1.0,
                c: 0.0,
                a: 0.0,
            },
        );
        assert!(bad.is_err());
    }

    #[test]
    fn monotonicity_entry_only_when_ordered() {
        let c = two_point();
        let x = rv(&[1.0, 2.0]);
        let y = rv(&[0.0, 2.0]);
        let r = sublinear_axiom_report(
            &c,
            &SublinearInputs {
                x: &x,
                y: &y,
                lambda: 1.0,
                c: 0.0,
                a: 1.0,
            },
        )
        .unwrap();
        assert!(r.get("monotonicity").unwrap().pass);
        let z = rv(&[2.0, 0.0]);
        let r = sublinear_axiom_report(
            &c,
            &SublinearInputs {
                x: &x,
                y: &z,
                lambda: 1.0,
                c: 0.0,
                a: 1.0,
            },
        )
        .unwrap();
        assert!(r.get("monotonicity").is_none());
    }

    fn geometric_events() -> (CredalSet<f64>, Vec<Event>) {
        let mut w: Vec<f64> = (1..=10).map(|n| 0.5f64.powi(n)).collect();
        w.push(0.5f64.powi(10));
        let c = CredalSet::from_weights(vec![w]).unwrap();
        let events = (0..10)
            .map(|i| Event::from_indices(11, [i]).unwrap())
            .collect();
        (c, events)
    }

    #[test]
    fn borel_cantelli_geometric() {
        let (c, events) = geometric_events();
        let bc = borel_cantelli_tail(&c, &events, 4).unwrap();
        assert_eq!(bc.tail_bound, 0.1240234375);
        assert_eq!(bc.tail_bound, 0.125 - 0.5f64.powi(10));
        assert_eq!(bc.tail_union, bc.tail_bound);
        assert_eq!(bc.series_sum, 1.0 - 0.5f64.powi(10));
        assert!(borel_cantelli_tail(&c, &events, 0).is_err());
        assert!(borel_cantelli_tail(&c, &events, 11).is_err());
    }

    #[test]
    fn borel_cantelli_single_event_and_subadditivity() {
        let c = two_point();
        let a = vec![Event::from_indices(2, [1]).unwrap()];
        let bc = borel_cantelli_tail(&c, &a, 1).unwrap();
        assert_eq!(bc.tail_bound, 0.5);
        assert_eq!(bc.tail_union, 0.5);
        let overlapping = vec![Event::full(2), Event::from_indices(2, [0]).unwrap()];
        let bc = borel_cantelli_tail(&c, &overlapping, 1).unwrap();
        assert!(bc.tail_union <= bc.tail_bound);
    }
}
