use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_dim, CredalSet, RandomVariable};
use crate::scalar::Scalar;

/// Joint semantics of a [`SequenceModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Joint {
    /// Each coordinate lives on its own copy of the outcome space and picks
    /// its measure from the credal set independently of the others.
    #[serde(rename = "rectangular")]
    Rectangular,
    /// Two variables on one shared copy of the outcome space.
    #[serde(rename = "comonotone-pair")]
    ComonotonePair,
}

/// A marginal credal set, per-coordinate random variables and a joint
/// semantics.
///
/// Under [`Joint::Rectangular`] the coordinate sequence is extended
/// periodically: coordinate `i` (0-based) uses `variables[i % len]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceModel<T> {
    credal: CredalSet<T>,
    variables: Vec<RandomVariable<T>>,
    names: Vec<String>,
    joint: Joint,
}

impl<T: Scalar> SequenceModel<T> {
    pub fn rectangular(credal: CredalSet<T>, variables: Vec<RandomVariable<T>>) -> Result<Self> {
        Self::new(credal, variables, Joint::Rectangular)
    }

    pub fn comonotone_pair(
        credal: CredalSet<T>,
        first: RandomVariable<T>,
        second: RandomVariable<T>,
    ) -> Result<Self> {
        Self::new(credal, vec![first, second], Joint::ComonotonePair)
    }

    pub fn new(
        credal: CredalSet<T>,
        variables: Vec<RandomVariable<T>>,
        joint: Joint,
    ) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::Empty("sequence model variables"));
        }
        if joint == Joint::ComonotonePair && variables.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: variables.len(),
            });
        }
        for v in &variables {
            check_dim(credal.size(), v.len())?;
        }
        let names = (1..=variables.len()).map(|i| format!("X{i}")).collect();
        Ok(Self {
            credal,
            variables,
            names,
            joint,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        check_dim(self.variables.len(), names.len())?;
        self.names = names;
        Ok(self)
    }

    pub fn credal(&self) -> &CredalSet<T> {
        &self.credal
    }

    pub fn variables(&self) -> &[RandomVariable<T>] {
        &self.variables
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn joint(&self) -> Joint {
        self.joint
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// Largest horizon the joint semantics defines, `None` if unbounded.
    pub fn max_horizon(&self) -> Option<usize> {
        match self.joint {
            Joint::Rectangular => None,
            Joint::ComonotonePair => Some(2),
        }
    }

    /// Random variable of coordinate `i` (0-based).
    pub fn coordinate(&self, i: usize) -> &RandomVariable<T> {
        &self.variables[i % self.variables.len()]
    }

    pub(crate) fn check_horizon(&self, n: usize) -> Result<()> {
        match self.max_horizon() {
            Some(max) if n > max => Err(Error::InvalidParameter(format!(
                "horizon {n} exceeds the {max} coordinates of a comonotone pair"
            ))),
            _ => Ok(()),
        }
    }

    /// Same model with coordinates permuted: new coordinate `k` is old
    /// coordinate `order[k]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        check_dim(self.len(), order.len())?;
        let mut seen = vec![false; self.len()];
        for &o in order {
            if o >= self.len() || seen[o] {
                return Err(Error::InvalidParameter(format!(
                    "{order:?} is not a permutation"
                )));
            }
            seen[o] = true;
        }
        Ok(Self {
            credal: self.credal.clone(),
            variables: order.iter().map(|&o| self.variables[o].clone()).collect(),
            names: order.iter().map(|&o| self.names[o].clone()).collect(),
            joint: self.joint,
        })
    }

    /// Same joint semantics with every variable replaced by `f_i(X_i)`.
    pub fn map_variables(
        &self,
        maps: impl Fn(usize, &RandomVariable<T>) -> RandomVariable<T>,
    ) -> Self {
        Self {
            credal: self.credal.clone(),
            variables: self
                .variables
                .iter()
                .enumerate()
                .map(|(i, v)| maps(i, v))
                .collect(),
            names: self.names.clone(),
            joint: self.joint,
        }
    }

    /// Range `[min, max]` over all variables and outcomes.
    pub fn value_range(&self) -> (T, T) {
        let mut lo = self.variables[0].min();
        let mut hi = self.variables[0].max();
        for v in &self.variables[1..] {
            let (a, b) = (v.min(), v.max());
            if a < lo {
                lo = a;
            }
            if b > hi {
                hi = b;
            }
        }
        (lo, hi)
    }
}
