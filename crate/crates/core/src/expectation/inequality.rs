//! Hölder, Chebyshev and Jensen inequalities under the upper expectation.

use num_traits::Float;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::capacity::{lower_prob, upper_prob};
use crate::error::{Error, Result};
use crate::model::{CredalSet, Event, RandomVariable};
use crate::report::{Check, Report};
use crate::scalar::Scalar;

use super::{lower_expectation, upper_expectation};

/// Scalar functions with machine-checkable shape properties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalarFn {
    /// `slope·x + intercept`
    Affine { slope: f64, intercept: f64 },
    /// `|x|^exponent`
    Power { exponent: f64 },
    /// `exp(rate·x)`
    Exp { rate: f64 },
    /// `|x|`
    Abs,
    /// `max_k (slope_k·x + intercept_k)`, pieces as `[slope, intercept]`
    MaxAffine { pieces: Vec<[f64; 2]> },
}

impl ScalarFn {
    pub fn eval<T: Scalar + Float>(&self, x: T) -> T {
        let c = |v: f64| <T as Scalar>::from_f64_lossy(v);
        match self {
            ScalarFn::Affine { slope, intercept } => c(*slope) * x + c(*intercept),
            ScalarFn::Power { exponent } => Float::powf(Float::abs(x), c(*exponent)),
            ScalarFn::Exp { rate } => Float::exp(c(*rate) * x),
            ScalarFn::Abs => Float::abs(x),
            ScalarFn::MaxAffine { pieces } => pieces
                .iter()
                .map(|[s, b]| c(*s) * x + c(*b))
                .fold(T::neg_infinity(), Float::max),
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            ScalarFn::Power { exponent } => *exponent >= 1.0,
            ScalarFn::MaxAffine { pieces } => !pieces.is_empty(),
            _ => true,
        }
    }

    /// Nondecreasing on all of ℝ.
    pub fn is_nondecreasing(&self) -> bool {
        match self {
            ScalarFn::Affine { slope, .. } => *slope >= 0.0,
            ScalarFn::Exp { rate } => *rate >= 0.0,
            ScalarFn::MaxAffine { pieces } => {
                !pieces.is_empty() && pieces.iter().all(|p| p[0] >= 0.0)
            }
            ScalarFn::Power { .. } | ScalarFn::Abs => false,
        }
    }

    /// Even, and nondecreasing on `(0, ∞)`.
    pub fn is_even_monotone(&self) -> bool {
        match self {
            ScalarFn::Power { exponent } => *exponent >= 0.0,
            ScalarFn::Abs => true,
            ScalarFn::Affine { slope, .. } => *slope == 0.0,
            ScalarFn::Exp { rate } => *rate == 0.0,
            ScalarFn::MaxAffine { pieces } => {
                !pieces.is_empty() && pieces.iter().all(|p| p[0] == 0.0)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            ScalarFn::Affine { slope, intercept } => format!("{slope}x+{intercept}"),
            ScalarFn::Power { exponent } => format!("|x|^{exponent}"),
            ScalarFn::Exp { rate } => format!("exp({rate}x)"),
            ScalarFn::Abs => "|x|".into(),
            ScalarFn::MaxAffine { pieces } => format!("max-affine({} pieces)", pieces.len()),
        }
    }
}

/// Inputs for [`inequality_suite`].
#[derive(Debug, Clone)]
pub struct InequalityInputs<'a, T> {
    pub x: &'a RandomVariable<T>,
    pub y: &'a RandomVariable<T>,
    /// Hölder exponents, `1/p + 1/q = 1`.
    pub p: T,
    pub q: T,
    /// Chebyshev threshold.
    pub threshold: T,
    /// Chebyshev and Jensen function.
    pub f: &'a ScalarFn,
}

fn relative_tol<T: Scalar + Float>(reference: T) -> T {
    <T as Scalar>::tolerance() * Float::max(T::one(), Float::abs(reference))
}

/// Evaluates both sides of Hölder's inequality, the applicable Chebyshev
/// inequalities (the plain form when `f` is nondecreasing, the `|X|` form when
/// `f` is even and monotone on `(0, ∞)` and the threshold is positive) and
/// Jensen's inequality. Gaps are checked against `1e-12·max(1, |rhs|)`.
pub fn inequality_suite<T: Scalar + Float>(
    credal: &CredalSet<T>,
    inputs: &InequalityInputs<'_, T>,
) -> Result<Report> {
    let InequalityInputs {
        x,
        y,
        p,
        q,
        threshold,
        f,
    } = inputs;
    let (p, q, t) = (*p, *q, *threshold);
    let one = T::one();
    let conj = one / p + one / q - one;
    if !(p > one && q > one) || Float::abs(conj) > <T as Scalar>::tolerance() {
        return Err(Error::BadExponents {
            p: p.to_f64_lossy(),
            q: q.to_f64_lossy(),
        });
    }
    if !f.is_convex() {
        return Err(Error::InadmissibleFunction(format!(
            "{} is not convex",
            f.name()
        )));
    }
    credal.check_variable(x)?;
    credal.check_variable(y)?;
    let up = |v: &RandomVariable<T>| upper_expectation(credal, v);
    let mut r = Report::new();

    let lhs = up(&x.mul(y)?.abs())?;
    let xp = up(&x.map(|v| Float::powf(Float::abs(*v), p)))?;
    let yq = up(&y.map(|v| Float::powf(Float::abs(*v), q)))?;
    let rhs = Float::powf(xp, one / p) * Float::powf(yq, one / q);
    r.record(
        Check::at_most("holder", &lhs, &rhs, &relative_tol(rhs))
            .with_witness(json!({ "p": p.to_f64_lossy(), "q": q.to_f64_lossy() })),
    );

    let fx = x.map(|v| f.eval(*v));
    let ft = f.eval(t);
    let mut chebyshev = false;
    if f.is_nondecreasing() {
        if !(ft > T::zero()) {
            return Err(Error::NonPositiveF {
                at: t.to_f64_lossy(),
            });
        }
        check_nonnegative_on(f, &fx)?;
        let event = Event::at_least(x, &t);
        let lhs_u = upper_prob(credal, &event)?;
        let rhs_u = up(&fx)? / ft;
        r.record(Check::at_most(
            "chebyshev_upper",
            &lhs_u,
            &rhs_u,
            &relative_tol(rhs_u),
        ));
        let lhs_l = lower_prob(credal, &event)?;
        let rhs_l = lower_expectation(credal, &fx)? / ft;
        r.record(Check::at_most(
            "chebyshev_lower",
            &lhs_l,
            &rhs_l,
            &relative_tol(rhs_l),
        ));
        chebyshev = true;
    }
    if f.is_even_monotone() && t > T::zero() {
        if !(ft > T::zero()) {
            return Err(Error::NonPositiveF {
                at: t.to_f64_lossy(),
            });
        }
        check_nonnegative_on(f, &fx)?;
        let event = Event::at_least(&x.abs(), &t);
        let lhs_u = upper_prob(credal, &event)?;
        let rhs_u = up(&fx)? / ft;
        r.record(Check::at_most(
            "chebyshev_abs_upper",
            &lhs_u,
            &rhs_u,
            &relative_tol(rhs_u),
        ));
        let lhs_l = lower_prob(credal, &event)?;
        let rhs_l = lower_expectation(credal, &fx)? / ft;
        r.record(Check::at_most(
            "chebyshev_abs_lower",
            &lhs_l,
            &rhs_l,
            &relative_tol(rhs_l),
        ));
        chebyshev = true;
    }
    if !chebyshev {
        return Err(Error::InadmissibleFunction(format!(
            "{} fits neither Chebyshev form at threshold {}",
            f.name(),
            t.to_f64_lossy()
        )));
    }

    let jl = up(&fx)?;
    let jr = f.eval(up(x)?);
    r.record(
        Check::at_least("jensen", &jl, &jr, &relative_tol(jl))
            .with_witness(json!({ "f": f.name() })),
    );
    Ok(r)
}

fn check_nonnegative_on<T: Scalar + Float>(f: &ScalarFn, fx: &RandomVariable<T>) -> Result<()> {
    match fx.values().iter().position(|v| *v < T::zero()) {
        Some(i) => Err(Error::InadmissibleFunction(format!(
            "{} is negative ({}) on outcome {i}",
            f.name(),
            fx.values()[i].to_f64_lossy()
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> (CredalSet<f64>, RandomVariable<f64>, RandomVariable<f64>) {
        let c = CredalSet::from_weights(vec![vec![0.5, 0.5], vec![0.8, 0.2]]).unwrap();
        let x = RandomVariable::new(vec![0.0, 1.0]).unwrap();
        let y = RandomVariable::constant(2, 1.0);
        (c, x, y)
    }

    fn run(f: &ScalarFn, t: f64) -> Result<Report> {
        let (c, x, y) = fixture();
        inequality_suite(
            &c,
            &InequalityInputs {
                x: &x,
                y: &y,
                p: 2.0,
                q: 2.0,
                threshold: t,
                f,
            },
        )
    }

    #[test]
    fn holder_example() {
        let r = run(
            &ScalarFn::Affine {
                slope: 1.0,
                intercept: 1.0,
            },
            1.0,
        )
        .unwrap();
        let h = r.get("holder").unwrap();
        assert_eq!(h.lhs, 0.5);
        assert!((h.rhs - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(h.pass);
    }

    #[test]
    fn chebyshev_example() {
        let r = run(
            &ScalarFn::Affine {
                slope: 1.0,
                intercept: 1.0,
            },
            1.0,
        )
        .unwrap();
        let c = r.get("chebyshev_upper").unwrap();
        assert_eq!(c.lhs, 0.5);
        assert_eq!(c.rhs, 0.75);
        let l = r.get("chebyshev_lower").unwrap();
        assert_eq!(l.lhs, 0.2);
        assert!((l.rhs - 0.6).abs() < 1e-15);
        assert!(r.all_pass());
    }

    #[test]
    fn jensen_example() {
        let r = run(&ScalarFn::Power { exponent: 2.0 }, 1.0).unwrap();
        let j = r.get("jensen").unwrap();
        assert_eq!(j.lhs, 0.5);
        assert_eq!(j.rhs, 0.25);
        assert!(r.get("chebyshev_abs_upper").unwrap().pass);
        assert!(r.get("chebyshev_upper").is_none());
    }

    #[test]
    fn error_paths() {
        let (c, x, y) = fixture();
        let f = ScalarFn::Exp { rate: 1.0 };
        let bad = inequality_suite(
            &c,
            &InequalityInputs {
                x: &x,
                y: &y,
                p: 2.0,
                q: 3.0,
                threshold: 0.0,
                f: &f,
            },
        );
        assert!(matches!(bad, Err(Error::BadExponents { .. })));
        let g = ScalarFn::Affine {
            slope: 1.0,
            intercept: 0.0,
        };
        assert!(matches!(run(&g, 0.0), Err(Error::NonPositiveF { .. })));
        assert!(matches!(run(&g, -1.0), Err(Error::NonPositiveF { .. })));
        let h = ScalarFn::Power { exponent: 0.5 };
        assert!(matches!(run(&h, 1.0), Err(Error::InadmissibleFunction(_))));
        assert!(matches!(
            run(&ScalarFn::Abs, 0.0),
            Err(Error::InadmissibleFunction(_))
        ));
    }

    #[test]
    fn catalog_shapes() {
        let m = ScalarFn::MaxAffine {
            pieces: vec![[0.0, 1.0], [2.0, 0.0]],
        };
        assert!(m.is_convex() && m.is_nondecreasing() && !m.is_even_monotone());
        assert_eq!(m.eval(3.0), 6.0);
        assert_eq!(m.eval(-3.0), 1.0);
        assert!(ScalarFn::Abs.is_even_monotone());
        let json = serde_json::to_string(&ScalarFn::Exp { rate: 1.0 }).unwrap();
        assert_eq!(json, r#"{"kind":"exp","rate":1.0}"#);
    }
}
