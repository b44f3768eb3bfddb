use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{clamp, Scalar};

/// Monotonicity of a test function or map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
        }
    }
}

/// A scalar function applied pointwise to a coordinate.
pub trait Univariate<T>: Send + Sync {
    fn eval(&self, x: &T) -> T;

    fn describe(&self) -> String;
}

/// Bounded, continuous, monotone functions into `[0, 1]`.
///
/// An increasing ramp is `clamp((x - threshold) / width, 0, 1)`; a decreasing
/// ramp is one minus that.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction<T> {
    Ramp {
        threshold: T,
        width: T,
        direction: Direction,
    },
    Constant {
        value: T,
    },
}

impl<T: Scalar> TestFunction<T> {
    pub fn ramp(threshold: T, width: T, direction: Direction) -> Result<Self> {
        if width <= T::zero() {
            return Err(Error::NonPositiveWidth(width.to_f64_lossy()));
        }
        Ok(TestFunction::Ramp {
            threshold,
            width,
            direction,
        })
    }

    pub fn constant(value: T) -> Result<Self> {
        if value < T::zero() || value > T::one() {
            return Err(Error::InvalidParameter(format!(
                "constant test function {value:?} outside [0, 1]"
            )));
        }
        Ok(TestFunction::Constant { value })
    }

    /// `None` for constants, which are monotone in both senses.
    pub fn direction(&self) -> Option<Direction> {
        match self {
            TestFunction::Ramp { direction, .. } => Some(*direction),
            TestFunction::Constant { .. } => None,
        }
    }

    pub fn apply(&self, x: &T) -> T {
        match self {
            TestFunction::Ramp {
                threshold,
                width,
                direction,
            } => {
                let up = clamp(
                    (x.clone() - threshold.clone()) / width.clone(),
                    T::zero(),
                    T::one(),
                );
                match direction {
                    Direction::Increasing => up,
                    Direction::Decreasing => T::one() - up,
                }
            }
            TestFunction::Constant { value } => value.clone(),
        }
    }

    /// The ramp with the same threshold and width, opposite direction.
    pub fn mirrored(&self) -> Self {
        match self {
            TestFunction::Ramp {
                threshold,
                width,
                direction,
            } => TestFunction::Ramp {
                threshold: threshold.clone(),
                width: width.clone(),
                direction: direction.flipped(),
            },
            c => c.clone(),
        }
    }
}

impl<T: Scalar> Univariate<T> for TestFunction<T> {
    fn eval(&self, x: &T) -> T {
        self.apply(x)
    }

    fn describe(&self) -> String {
        match self {
            TestFunction::Ramp {
                threshold,
                width,
                direction,
            } => format!(
                "ramp(t={}, w={}, {:?})",
                threshold.to_f64_lossy(),
                width.to_f64_lossy(),
                direction
            ),
            TestFunction::Constant { value } => format!("const({})", value.to_f64_lossy()),
        }
    }
}

/// A grid of parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec<T> {
    Values(Vec<T>),
    Linspace { start: T, stop: T, count: usize },
}

impl<T: Scalar> GridSpec<T> {
    pub fn points(&self) -> Result<Vec<T>> {
        let pts = match self {
            GridSpec::Values(v) => v.clone(),
            GridSpec::Linspace { start, stop, count } => linspace(start, stop, *count),
        };
        if pts.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(pts)
    }
}

fn linspace<T: Scalar>(start: &T, stop: &T, count: usize) -> Vec<T> {
    match count {
        0 => Vec::new(),
        1 => vec![start.clone()],
        _ => {
            let step = (stop.clone() - start.clone())
                / T::from_usize(count - 1).expect("grid count fits the scalar type");
            (0..count)
                .map(|k| start.clone() + step.clone() * T::from_usize(k).expect("fits"))
                .collect()
        }
    }
}

/// Test functions sharing one direction, with the grids that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFamily<T> {
    functions: Vec<TestFunction<T>>,
    direction: Direction,
    thresholds: Vec<T>,
    widths: Vec<T>,
}

impl<T: Scalar> TestFamily<T> {
    /// Wraps explicit functions; every non-constant member must have
    /// `direction`.
    pub fn from_functions(functions: Vec<TestFunction<T>>, direction: Direction) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if functions
            .iter()
            .any(|f| f.direction().is_some_and(|d| d != direction))
        {
            return Err(Error::MixedMonotonicity);
        }
        Ok(Self {
            functions,
            direction,
            thresholds: Vec::new(),
            widths: Vec::new(),
        })
    }

    pub fn functions(&self) -> &[TestFunction<T>] {
        &self.functions
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn thresholds(&self) -> &[T] {
        &self.thresholds
    }

    pub fn widths(&self) -> &[T] {
        &self.widths
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Same grid, opposite direction.
    pub fn mirrored(&self) -> Self {
        Self {
            functions: self.functions.iter().map(TestFunction::mirrored).collect(),
            direction: self.direction.flipped(),
            thresholds: self.thresholds.clone(),
            widths: self.widths.clone(),
        }
    }
}

/// Cartesian product of threshold and width grids, threshold-major.
pub fn ramp_family<T: Scalar>(
    thresholds: &GridSpec<T>,
    widths: &GridSpec<T>,
    direction: Direction,
) -> Result<TestFamily<T>> {
    let ts = thresholds.points()?;
    let ws = widths.points()?;
    if let Some(w) = ws.iter().find(|w| **w <= T::zero()) {
        return Err(Error::NonPositiveWidth(w.to_f64_lossy()));
    }
    let mut functions = Vec::with_capacity(ts.len() * ws.len());
    for t in &ts {
        for w in &ws {
            functions.push(TestFunction::Ramp {
                threshold: t.clone(),
                width: w.clone(),
                direction,
            });
        }
    }
    Ok(TestFamily {
        functions,
        direction,
        thresholds: ts,
        widths: ws,
    })
}

/// Default family over a value range `[lo, hi]` of spread `R = hi - lo`
/// (`R = 1` for a degenerate range): widths `R/4, R/2, R` and nine
/// thresholds evenly spaced on `[lo - R/2, hi + R/2]`.
pub fn default_ramp_family<T: Scalar>(lo: &T, hi: &T, direction: Direction) -> TestFamily<T> {
    let mut spread = hi.clone() - lo.clone();
    if spread <= T::zero() {
        spread = T::one();
    }
    let two = T::one() + T::one();
    let half = spread.clone() / two.clone();
    let thresholds = GridSpec::Linspace {
        start: lo.clone() - half.clone(),
        stop: hi.clone() + half.clone(),
        count: 9,
    };
    let widths = GridSpec::Values(vec![half.clone() / two, half, spread]);
    ramp_family(&thresholds, &widths, direction).expect("default grids are valid")
}

/// Continuous monotone maps for transforming coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneMap<T> {
    Identity,
    /// `slope·x + intercept`
    Affine {
        slope: T,
        intercept: T,
    },
    /// `clamp(x, lo, hi)`
    Clamp {
        lo: T,
        hi: T,
    },
    /// `clamp(x - center, -radius, radius) + offset`
    Truncation {
        center: T,
        radius: T,
        offset: T,
    },
    Ramp {
        function: TestFunction<T>,
    },
}

impl<T: Scalar> MonotoneMap<T> {
    pub fn affine(slope: T, intercept: T) -> Self {
        MonotoneMap::Affine { slope, intercept }
    }

    /// `None` for constant maps.
    pub fn direction(&self) -> Option<Direction> {
        match self {
            MonotoneMap::Identity => Some(Direction::Increasing),
            MonotoneMap::Affine { slope, .. } => {
                if *slope > T::zero() {
                    Some(Direction::Increasing)
                } else if *slope < T::zero() {
                    Some(Direction::Decreasing)
                } else {
                    None
                }
            }
            MonotoneMap::Clamp { lo, hi } => (lo < hi).then_some(Direction::Increasing),
            MonotoneMap::Truncation { radius, .. } => {
                (*radius > T::zero()).then_some(Direction::Increasing)
            }
            MonotoneMap::Ramp { function } => function.direction(),
        }
    }

    pub fn apply(&self, x: &T) -> T {
        match self {
            MonotoneMap::Identity => x.clone(),
            MonotoneMap::Affine { slope, intercept } => {
                slope.clone() * x.clone() + intercept.clone()
            }
            MonotoneMap::Clamp { lo, hi } => clamp(x.clone(), lo.clone(), hi.clone()),
            MonotoneMap::Truncation {
                center,
                radius,
                offset,
            } => {
                clamp(x.clone() - center.clone(), -radius.clone(), radius.clone()) + offset.clone()
            }
            MonotoneMap::Ramp { function } => function.apply(x),
        }
    }
}

impl<T: Scalar> Univariate<T> for MonotoneMap<T> {
    fn eval(&self, x: &T) -> T {
        self.apply(x)
    }

    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

/// The shared direction of `maps`, ignoring constants. Errors when two
/// non-constant maps disagree.
pub fn common_direction<T: Scalar>(maps: &[MonotoneMap<T>]) -> Result<Option<Direction>> {
    let mut dir = None;
    for m in maps {
        match (dir, m.direction()) {
            (_, None) => {}
            (None, d) => dir = d,
            (Some(a), Some(b)) if a != b => return Err(Error::MixedMonotonicity),
            _ => {}
        }
    }
    Ok(dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_family_examples() {
        let fam = ramp_family(
            &GridSpec::Values(vec![0.0]),
            &GridSpec::Values(vec![1.0]),
            Direction::Increasing,
        )
        .unwrap();
        assert_eq!(fam.len(), 1);
        let f = &fam.functions()[0];
        assert_eq!(f.apply(&-0.5), 0.0);
        assert_eq!(f.apply(&0.25), 0.25);
        assert_eq!(f.apply(&3.0), 1.0);

        let fam = ramp_family(
            &GridSpec::Linspace {
                start: 0.0,
                stop: 1.0,
                count: 5,
            },
            &GridSpec::Values(vec![0.5, 1.0, 2.0]),
            Direction::Increasing,
        )
        .unwrap();
        assert_eq!(fam.len(), 15);
        assert_eq!(fam.thresholds(), &[0.0, 0.25, 0.5, 0.75, 1.0]);

        let dec = TestFunction::ramp(0.0, 1.0, Direction::Decreasing).unwrap();
        assert_eq!(dec.apply(&-1.0), 1.0);
        assert_eq!(dec.apply(&2.0), 0.0);
    }

    #[test]
    fn ramp_family_errors() {
        let empty = GridSpec::Values(Vec::<f64>::new());
        let one = GridSpec::Values(vec![1.0]);
        assert_eq!(
            ramp_family(&empty, &one, Direction::Increasing),
            Err(Error::EmptyGrid)
        );
        assert_eq!(
            ramp_family(&one, &GridSpec::Values(vec![0.0]), Direction::Increasing),
            Err(Error::NonPositiveWidth(0.0))
        );
        assert!(TestFunction::ramp(0.0, -1.0, Direction::Increasing).is_err());
        assert!(TestFunction::constant(1.5).is_err());
    }

    #[test]
    fn default_family_shape() {
        let fam = default_ramp_family(&0.0, &1.0, Direction::Increasing);
        assert_eq!(fam.len(), 27);
        assert_eq!(fam.thresholds().first(), Some(&-0.5));
        assert_eq!(fam.thresholds().last(), Some(&1.5));
        assert_eq!(fam.widths(), &[0.25, 0.5, 1.0]);
        let mirrored = fam.mirrored();
        assert_eq!(mirrored.direction(), Direction::Decreasing);
        assert!(mirrored
            .functions()
            .iter()
            .all(|f| f.direction() == Some(Direction::Decreasing)));
    }

    #[test]
    fn family_rejects_mixed_directions() {
        let up = TestFunction::ramp(0.0, 1.0, Direction::Increasing).unwrap();
        let c = TestFunction::constant(0.5).unwrap();
        assert!(TestFamily::from_functions(vec![up.clone(), c], Direction::Increasing).is_ok());
        assert_eq!(
            TestFamily::from_functions(vec![up.clone(), up.mirrored()], Direction::Increasing),
            Err(Error::MixedMonotonicity)
        );
    }

    #[test]
    fn monotone_maps() {
        let t = MonotoneMap::Truncation {
            center: 0.5,
            radius: 0.2,
            offset: 0.0,
        };
        assert_eq!(t.apply(&0.0), -0.2);
        assert_eq!(t.apply(&1.0), 0.2);
        assert_eq!(t.direction(), Some(Direction::Increasing));
        let maps = vec![MonotoneMap::affine(2.0, 1.0), MonotoneMap::affine(0.0, 3.0)];
        assert_eq!(
            common_direction(&maps).unwrap(),
            Some(Direction::Increasing)
        );
        let mixed = vec![
            MonotoneMap::affine(2.0, 1.0),
            MonotoneMap::affine(-1.0, 0.0),
        ];
        assert_eq!(common_direction(&mixed), Err(Error::MixedMonotonicity));
    }
}
