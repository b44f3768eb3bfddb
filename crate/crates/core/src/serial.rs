//! JSON model descriptions and seeded random fixtures.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dependence::{Joint, SequenceModel};
use crate::error::{Error, Result};
use crate::model::{CredalSet, OutcomeSpace, ProbabilityMeasure, RandomVariable};

/// A sequence model as written in configuration files.
///
/// ```json
/// {"measures": [[0.7, 0.3], [0.3, 0.7]],
///  "variables": {"X": [0, 1], "Y": [0, -1]},
///  "joint": "comonotone-pair",
///  "order": ["X", "Y"]}
/// ```
///
/// Without `order`, variables are taken in name order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub measures: Vec<Vec<f64>>,
    pub variables: BTreeMap<String, Vec<f64>>,
    #[serde(default = "rectangular")]
    pub joint: Joint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

fn rectangular() -> Joint {
    Joint::Rectangular
}

impl ModelSpec {
    pub fn build(&self) -> Result<SequenceModel<f64>> {
        let size = match (&self.labels, self.space, self.measures.first()) {
            (Some(l), _, _) => l.len(),
            (None, Some(s), _) => s,
            (None, None, Some(m)) => m.len(),
            (None, None, None) => return Err(Error::Empty("credal set")),
        };
        if let Some(s) = self.space {
            if s != size {
                return Err(Error::DimensionMismatch {
                    expected: s,
                    found: size,
                });
            }
        }
        let space = match &self.labels {
            Some(l) => OutcomeSpace::with_labels(l.clone())?,
            None => OutcomeSpace::new(size)?,
        };
        let measures = self
            .measures
            .iter()
            .map(|w| ProbabilityMeasure::new(w.clone()))
            .collect::<Result<Vec<_>>>()?;
        let credal = CredalSet::new(space, measures)?;
        let names: Vec<String> = match &self.order {
            Some(o) => o.clone(),
            None => self.variables.keys().cloned().collect(),
        };
        let variables = names
            .iter()
            .map(|n| {
                let v = self.variables.get(n).ok_or_else(|| {
                    Error::InvalidParameter(format!("unknown variable {n:?} in order"))
                })?;
                RandomVariable::new(v.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        SequenceModel::new(credal, variables, self.joint)?.with_names(names)
    }
}

/// A random credal set with `1..=max_measures` measures on `1..=max_size`
/// outcomes, and a variable with values uniform in `[lo, hi]`.
pub fn random_fixture(
    rng: &mut impl Rng,
    max_measures: usize,
    max_size: usize,
    lo: f64,
    hi: f64,
) -> (CredalSet<f64>, RandomVariable<f64>) {
    let size = rng.gen_range(1..=max_size);
    let credal = random_credal(rng, max_measures, size);
    (credal, random_variable(rng, size, lo, hi))
}

/// Measures are normalized exponential draws, sometimes with zeroed cells.
pub fn random_credal(rng: &mut impl Rng, max_measures: usize, size: usize) -> CredalSet<f64> {
    let k = rng.gen_range(1..=max_measures);
    let weights = (0..k)
        .map(|_| {
            let mut w: Vec<f64> = (0..size)
                .map(|_| {
                    if size > 1 && rng.gen_bool(0.15) {
                        0.0
                    } else {
                        -rng.gen_range(f64::EPSILON..1.0f64).ln()
                    }
                })
                .collect();
            if w.iter().all(|x| *x == 0.0) {
                w[rng.gen_range(0..size)] = 1.0;
            }
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= total);
            w
        })
        .collect();
    CredalSet::from_weights(weights).expect("normalized weights")
}

pub fn random_variable(rng: &mut impl Rng, size: usize, lo: f64, hi: f64) -> RandomVariable<f64> {
    RandomVariable::new((0..size).map(|_| rng.gen_range(lo..=hi)).collect()).expect("finite values")
}

/// Seeded generator used for fixtures.
pub fn fixture_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_pair_model() {
        let spec: ModelSpec = serde_json::from_str(
            r#"{"measures": [[0.7, 0.3], [0.3, 0.7]],
                "variables": {"Y": [0, -1], "X": [0, 1]},
                "joint": "comonotone-pair", "order": ["X", "Y"]}"#,
        )
        .unwrap();
        let m = spec.build().unwrap();
        assert_eq!(m.names(), ["X", "Y"]);
        assert_eq!(m.joint(), Joint::ComonotonePair);
        assert_eq!(m.variables()[1].values(), &[0.0, -1.0]);
    }

    #[test]
    fn default_order_is_by_name() {
        let spec: ModelSpec =
            serde_json::from_str(r#"{"measures": [[1]], "variables": {"b": [2], "a": [1]}}"#)
                .unwrap();
        assert_eq!(spec.build().unwrap().names(), ["a", "b"]);
    }

    #[test]
    fn bad_models() {
        let spec: ModelSpec =
            serde_json::from_str(r#"{"measures": [[0.5, 0.6]], "variables": {"x": [0, 1]}}"#)
                .unwrap();
        assert!(matches!(spec.build(), Err(Error::NotNormalized { .. })));
        let spec: ModelSpec =
            serde_json::from_str(r#"{"measures": [[1]], "variables": {"x": [0]}, "order": ["y"]}"#)
                .unwrap();
        assert!(spec.build().is_err());
    }

    #[test]
    fn fixtures_are_valid_and_seeded() {
        let mut a = fixture_rng(5);
        let mut b = fixture_rng(5);
        for _ in 0..50 {
            let (c1, x1) = random_fixture(&mut a, 6, 8, -10.0, 10.0);
            let (c2, x2) = random_fixture(&mut b, 6, 8, -10.0, 10.0);
            assert_eq!((c1.len(), x1.values()), (c2.len(), x2.values()));
            assert!(c1.len() <= 6 && c1.size() <= 8);
        }
    }
}
