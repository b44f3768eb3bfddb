//! Finite outcome spaces, events, probability measures, random variables and
//! credal sets.
//!
//! Every type validates on construction and is immutable afterwards.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite set of atomic outcomes `0..size`, optionally labelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpace {
    size: usize,
    labels: Option<Vec<String>>,
}

impl OutcomeSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Empty("outcome space"));
        }
        Ok(Self { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Empty("outcome space"));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an outcome: its label, or its index.
    pub fn label(&self, index: usize) -> String {
        match &self.labels {
            Some(l) => l[index].clone(),
            None => index.to_string(),
        }
    }
}

/// A subset of an outcome space of known size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    members: Vec<bool>,
}

impl Event {
    pub fn from_indices(size: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members = vec![false; size];
        for i in indices {
            if i >= size {
                return Err(Error::IndexOutOfRange { index: i, size });
            }
            members[i] = true;
        }
        Ok(Self { members })
    }

    pub fn empty(size: usize) -> Self {
        Self {
            members: vec![false; size],
        }
    }

    pub fn full(size: usize) -> Self {
        Self {
            members: vec![true; size],
        }
    }

    /// Event encoded by the low `size` bits of `mask`.
    pub fn from_mask(size: usize, mask: u64) -> Self {
        Self {
            members: (0..size).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// All `2^size` events, in mask order. Only sensible for small spaces.
    pub fn all(size: usize) -> impl Iterator<Item = Event> {
        assert!(size < 64, "power set of {size} outcomes is not enumerable");
        (0..1u64 << size).map(move |m| Event::from_mask(size, m))
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.get(index).copied().unwrap_or(false)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn complement(&self) -> Self {
        Self {
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.size() == other.size()
            && self
                .members
                .iter()
                .zip(&other.members)
                .all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &Event) -> Result<Self> {
        check_dim(self.size(), other.size())?;
        Ok(Self {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a || b)
                .collect(),
        })
    }

    pub fn intersection(&self, other: &Event) -> Result<Self> {
        check_dim(self.size(), other.size())?;
        Ok(Self {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| a && b)
                .collect(),
        })
    }

    /// `{ω : X(ω) ≥ t}`.
    pub fn at_least<T: Scalar>(x: &RandomVariable<T>, t: &T) -> Self {
        Self {
            members: x.values().iter().map(|v| v >= t).collect(),
        }
    }
}

/// A probability distribution over a finite outcome space.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure<T> {
    weights: Vec<T>,
}

impl<T: Scalar> ProbabilityMeasure<T> {
    /// Validates `weights`. Sums within tolerance of one are renormalized;
    /// negative weights down to `-negative_slack` are clamped to zero.
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Empty("measure weights"));
        }
        let neg_slack = -T::negative_slack();
        let mut sum = T::zero();
        let mut cleaned = Vec::with_capacity(weights.len());
        for (index, w) in weights.into_iter().enumerate() {
            if !w.is_finite_value() {
                return Err(Error::NonFinite { index });
            }
            if w < neg_slack {
                return Err(Error::NegativeWeight {
                    index,
                    weight: w.to_f64_lossy(),
                });
            }
            let w = if w < T::zero() { T::zero() } else { w };
            sum = sum + w.clone();
            cleaned.push(w);
        }
        let deviation = (sum.clone() - T::one()).abs();
        let within = if T::EXACT {
            deviation.is_zero()
        } else {
            deviation < T::tolerance()
        };
        if !within {
            return Err(Error::NotNormalized {
                sum: sum.to_f64_lossy(),
            });
        }
        if !sum.is_one() {
            for w in &mut cleaned {
                *w = w.clone() / sum.clone();
            }
        }
        Ok(Self { weights: cleaned })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Empty("measure weights"));
        }
        let n = T::from_usize(size).expect("size fits the scalar type");
        Ok(Self {
            weights: vec![T::one() / n; size],
        })
    }

    pub fn dirac(size: usize, at: usize) -> Result<Self> {
        if at >= size {
            return Err(Error::IndexOutOfRange { index: at, size });
        }
        let mut weights = vec![T::zero(); size];
        weights[at] = T::one();
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `E_P[X] = Σ_ω P(ω) X(ω)`.
    pub fn expectation(&self, x: &RandomVariable<T>) -> Result<T> {
        classical_expectation(self, x)
    }

    pub fn probability(&self, event: &Event) -> Result<T> {
        event_probability(self, event)
    }
}

/// Validates a weight vector into a measure.
pub fn make_measure<T: Scalar>(weights: Vec<T>) -> Result<ProbabilityMeasure<T>> {
    ProbabilityMeasure::new(weights)
}

/// A real value per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomVariable<T> {
    values: Vec<T>,
}

impl<T: Scalar> RandomVariable<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("random variable"));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn constant(size: usize, c: T) -> Self {
        Self {
            values: vec![c; size],
        }
    }

    pub fn indicator(event: &Event) -> Self {
        Self {
            values: (0..event.size())
                .map(|i| {
                    if event.contains(i) {
                        T::one()
                    } else {
                        T::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise image `f(X)`.
    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Self {
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn shift(&self, c: &T) -> Self {
        self.map(|v| v.clone() + c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn min(&self) -> T {
        self.values.iter().skip(1).fold(
            self.values[0].clone(),
            |m, v| if *v < m { v.clone() } else { m },
        )
    }

    pub fn max(&self) -> T {
        self.values.iter().skip(1).fold(
            self.values[0].clone(),
            |m, v| if *v > m { v.clone() } else { m },
        )
    }

    /// `true` when `self(ω) ≥ other(ω)` for every outcome.
    pub fn dominates(&self, other: &Self) -> bool {
        self.len() == other.len() && self.values.iter().zip(&other.values).all(|(a, b)| a >= b)
    }
}

/// A nonempty, ordered family of measures over one outcome space.
#[derive(Debug, Clone, PartialEq)]
pub struct CredalSet<T> {
    space: OutcomeSpace,
    measures: Vec<ProbabilityMeasure<T>>,
}

impl<T: Scalar> CredalSet<T> {
    pub fn new(space: OutcomeSpace, measures: Vec<ProbabilityMeasure<T>>) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::Empty("credal set"));
        }
        for m in &measures {
            check_dim(space.size(), m.len())?;
        }
        Ok(Self { space, measures })
    }

    /// Builds an unlabelled credal set from raw weight vectors.
    pub fn from_weights(weights: Vec<Vec<T>>) -> Result<Self> {
        let first = weights.first().ok_or(Error::Empty("credal set"))?;
        let space = OutcomeSpace::new(first.len())?;
        let measures = weights
            .into_iter()
            .map(ProbabilityMeasure::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, measures)
    }

    pub fn singleton(measure: ProbabilityMeasure<T>) -> Result<Self> {
        let space = OutcomeSpace::new(measure.len())?;
        Self::new(space, vec![measure])
    }

    pub fn space(&self) -> &OutcomeSpace {
        &self.space
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn measures(&self) -> &[ProbabilityMeasure<T>] {
        &self.measures
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    /// Pairs `(i, j)`, `i < j`, of measures with identical weights. Duplicates
    /// are legal but never change any upper or lower quantity.
    pub fn duplicate_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.measures.len() {
            for j in i + 1..self.measures.len() {
                if self.measures[i] == self.measures[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub(crate) fn check_variable(&self, x: &RandomVariable<T>) -> Result<()> {
        check_dim(self.size(), x.len())
    }

    pub(crate) fn check_event(&self, a: &Event) -> Result<()> {
        check_dim(self.size(), a.size())
    }
}

/// `E_P[X]`, the linear expectation under one measure.
pub fn classical_expectation<T: Scalar>(
    p: &ProbabilityMeasure<T>,
    x: &RandomVariable<T>,
) -> Result<T> {
    check_dim(p.len(), x.len())?;
    Ok(p.weights
        .iter()
        .zip(&x.values)
        .fold(T::zero(), |acc, (w, v)| acc + w.clone() * v.clone()))
}

/// `P(A)`; the empty event has probability zero.
pub fn event_probability<T: Scalar>(p: &ProbabilityMeasure<T>, a: &Event) -> Result<T> {
    check_dim(p.len(), a.size())?;
    Ok(a.indices()
        .fold(T::zero(), |acc, i| acc + p.weights[i].clone()))
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
