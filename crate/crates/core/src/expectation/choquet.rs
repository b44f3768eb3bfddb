use serde::{Deserialize, Serialize};

use crate::capacity::CapacityPair;
use crate::error::Result;
use crate::model::{CredalSet, Event, RandomVariable};
use crate::scalar::Scalar;

/// Which capacity integrates: `V` (upper) or `v` (lower).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Upper,
    Lower,
}

/// Discrete Choquet integral by the layer-cake sum.
///
/// With distinct sorted values `v_1 < … < v_k` of `X`,
/// `C[X] = v_1 + Σ_{j≥2} (v_j - v_{j-1}) κ(X ≥ v_j)`, which equals
/// `∫_0^∞ κ(X ≥ t) dt + ∫_{-∞}^0 (κ(X ≥ t) - 1) dt` for simple `X`.
pub fn choquet_expectation<T: Scalar>(
    credal: &CredalSet<T>,
    x: &RandomVariable<T>,
    side: Side,
) -> Result<T> {
    credal.check_variable(x)?;
    let cap = CapacityPair::new(credal);
    let mut levels: Vec<T> = x.values().to_vec();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("random variables are finite"));
    levels.dedup();

    let mut total = levels[0].clone();
    for w in levels.windows(2) {
        let survival = Event::at_least(x, &w[1]);
        let kappa = match side {
            Side::Upper => cap.upper(&survival)?,
            Side::Lower => cap.lower(&survival)?,
        };
        total = total + (w[1].clone() - w[0].clone()) * kappa;
    }
    Ok(total)
}
