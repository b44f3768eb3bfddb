//! Check outcomes in the report format `{check, lhs, rhs, gap, pass, witness}`.
//!
//! `gap` is the slack of the relation: `rhs - lhs` for `lhs ≤ rhs`,
//! `lhs - rhs` for `lhs ≥ rhs`, and `-|lhs - rhs|` for equalities. A check
//! passes when its gap is at least `-tolerance`. Pass/fail is decided in the
//! scalar type of the computation; the stored numbers are `f64` renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub pass: bool,
    pub witness: Value,
}

impl Check {
    /// `lhs ≤ rhs` up to `tol`.
    pub fn at_most<T: Scalar>(name: impl Into<String>, lhs: &T, rhs: &T, tol: &T) -> Self {
        let gap = rhs.clone() - lhs.clone();
        let pass = gap >= -tol.clone();
        Self::build(name, lhs, rhs, &gap, pass)
    }

    /// `lhs ≥ rhs` up to `tol`.
    pub fn at_least<T: Scalar>(name: impl Into<String>, lhs: &T, rhs: &T, tol: &T) -> Self {
        let gap = lhs.clone() - rhs.clone();
        let pass = gap >= -tol.clone();
        Self::build(name, lhs, rhs, &gap, pass)
    }

    /// `lhs = rhs` up to `tol`.
    pub fn equal<T: Scalar>(name: impl Into<String>, lhs: &T, rhs: &T, tol: &T) -> Self {
        let gap = -(lhs.clone() - rhs.clone()).abs();
        let pass = gap >= -tol.clone();
        Self::build(name, lhs, rhs, &gap, pass)
    }

    /// A pass/fail verdict that carries no numeric relation.
    pub fn verdict(name: impl Into<String>, pass: bool, witness: Value) -> Self {
        Self {
            check: name.into(),
            lhs: 0.0,
            rhs: 0.0,
            gap: if pass { 0.0 } else { -1.0 },
            pass,
            witness,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    fn build<T: Scalar>(name: impl Into<String>, lhs: &T, rhs: &T, gap: &T, pass: bool) -> Self {
        Self {
            check: name.into(),
            lhs: lhs.to_f64_lossy(),
            rhs: rhs.to_f64_lossy(),
            // `+ 0.0` turns a negative zero into zero.
            gap: gap.to_f64_lossy() + 0.0,
            pass,
            witness: Value::Null,
        }
    }
}

/// A list of checks keeping, per check name, the instance with the worst gap.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `c`, replacing an earlier check of the same name only when `c`
    /// is strictly worse. The first worst instance wins.
    pub fn record(&mut self, c: Check) {
        match self.checks.iter_mut().find(|e| e.check == c.check) {
            Some(existing) => {
                if (!c.pass && existing.pass) || (c.pass == existing.pass && c.gap < existing.gap) {
                    *existing = c;
                }
            }
            None => self.checks.push(c),
        }
    }

    /// Appends without merging.
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
