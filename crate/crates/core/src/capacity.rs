//! Upper and lower probabilities induced by a credal set.
//!
//! `V(A) = max_P P(A)` and `v(A) = min_P P(A)` over the listed measures. The
//! extremes of a linear functional over the convex hull are attained at the
//! listed vertices, so no optimizer is involved.

use serde_json::json;

use crate::error::Result;
use crate::model::{event_probability, CredalSet, Event};
use crate::report::{Check, Report};
use crate::scalar::{argmax, argmin, Scalar};

/// An extreme value together with the index of the measure attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremum<T> {
    pub value: T,
    pub measure: usize,
}

/// The pair `(V, v)` of a credal set. Values are derived on demand.
#[derive(Debug, Clone, Copy)]
pub struct CapacityPair<'a, T> {
    credal: &'a CredalSet<T>,
}

impl<'a, T: Scalar> CapacityPair<'a, T> {
    pub fn new(credal: &'a CredalSet<T>) -> Self {
        Self { credal }
    }

    pub fn credal(&self) -> &'a CredalSet<T> {
        self.credal
    }

    pub fn upper(&self, a: &Event) -> Result<T> {
        upper_prob(self.credal, a)
    }

    pub fn lower(&self, a: &Event) -> Result<T> {
        lower_prob(self.credal, a)
    }

    /// `V(A)` and the maximizing measure.
    pub fn upper_witness(&self, a: &Event) -> Result<Extremum<T>> {
        let probs = self.probabilities(a)?;
        let (measure, value) = argmax(probs).expect("credal sets are nonempty");
        Ok(Extremum { value, measure })
    }

    /// `v(A)` and the minimizing measure.
    pub fn lower_witness(&self, a: &Event) -> Result<Extremum<T>> {
        let probs = self.probabilities(a)?;
        let (measure, value) = argmin(probs).expect("credal sets are nonempty");
        Ok(Extremum { value, measure })
    }

    fn probabilities(&self, a: &Event) -> Result<Vec<T>> {
        self.credal.check_event(a)?;
        self.credal
            .measures()
            .iter()
            .map(|p| event_probability(p, a))
            .collect()
    }
}

/// Upper probability `V(A)`.
pub fn upper_prob<T: Scalar>(credal: &CredalSet<T>, a: &Event) -> Result<T> {
    Ok(CapacityPair::new(credal).upper_witness(a)?.value)
}

/// Lower probability `v(A)`.
pub fn lower_prob<T: Scalar>(credal: &CredalSet<T>, a: &Event) -> Result<T> {
    Ok(CapacityPair::new(credal).lower_witness(a)?.value)
}

/// Checks normalization, dominance `v ≤ V`, conjugacy `V(A) + v(Aᶜ) = 1` for
/// every listed event, and monotonicity of both capacities for every pair
/// `A ⊆ B` among the listed events together with `∅` and `Ω`.
///
/// One entry per axiom, carrying the worst instance and its witness.
pub fn capacity_axiom_report<T: Scalar>(credal: &CredalSet<T>, events: &[Event]) -> Result<Report> {
    let cap = CapacityPair::new(credal);
    let tol = T::tolerance();
    let size = credal.size();
    let mut report = Report::new();

    let empty = Event::empty(size);
    let full = Event::full(size);
    let zero = T::zero();
    let one = T::one();
    report.record(Check::equal(
        "normalization_upper_empty",
        &cap.upper(&empty)?,
        &zero,
        &tol,
    ));
    report.record(Check::equal(
        "normalization_lower_empty",
        &cap.lower(&empty)?,
        &zero,
        &tol,
    ));
    report.record(Check::equal(
        "normalization_upper_full",
        &cap.upper(&full)?,
        &one,
        &tol,
    ));
    report.record(Check::equal(
        "normalization_lower_full",
        &cap.lower(&full)?,
        &one,
        &tol,
    ));

    let mut all: Vec<Event> = Vec::with_capacity(events.len() + 2);
    for e in events {
        credal.check_event(e)?;
        all.push(e.clone());
    }
    all.push(empty);
    all.push(full);

    let uppers: Vec<Extremum<T>> = all
        .iter()
        .map(|e| cap.upper_witness(e))
        .collect::<Result<_>>()?;
    let lowers: Vec<Extremum<T>> = all
        .iter()
        .map(|e| cap.lower_witness(e))
        .collect::<Result<_>>()?;

    for (i, a) in all.iter().enumerate() {
        let members: Vec<usize> = a.indices().collect();
        let up = &uppers[i];
        let lo = &lowers[i];
        let lo_c = cap.lower_witness(&a.complement())?;
        let conj = up.value.clone() + lo_c.value.clone();
        report.record(
            Check::equal("conjugacy", &conj, &one, &tol).with_witness(json!({
                "event": members,
                "upper_measure": up.measure,
                "lower_complement_measure": lo_c.measure,
            })),
        );
        report.record(
            Check::at_most("dominance", &lo.value, &up.value, &tol)
                .with_witness(json!({ "event": members, "measure": lo.measure })),
        );
        report.record(
            Check::at_least("range", &up.value, &zero, &tol)
                .with_witness(json!({ "event": members })),
        );
        report.record(
            Check::at_most("range", &lo.value, &one, &tol)
                .with_witness(json!({ "event": members })),
        );
    }

    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            if i == j || !a.is_subset(b) {
                continue;
            }
            let witness = json!({
                "subset": a.indices().collect::<Vec<_>>(),
                "superset": b.indices().collect::<Vec<_>>(),
            });
            report.record(
                Check::at_most(
                    "monotonicity_upper",
                    &uppers[i].value,
                    &uppers[j].value,
                    &tol,
                )
                .with_witness(witness.clone()),
            );
            report.record(
                Check::at_most(
                    "monotonicity_lower",
                    &lowers[i].value,
                    &lowers[j].value,
                    &tol,
                )
                .with_witness(witness),
            );
        }
    }
    Ok(report)
}
