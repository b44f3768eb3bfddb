//! Exact computations on finite credal sets: upper and lower probabilities,
//! sublinear and Choquet expectations, negative-association and independence
//! checks over sequence models, and Monte Carlo experiments for weighted
//! strong laws of large numbers.
//!
//! The algebraic layers are generic over [`Scalar`] (`f32`, `f64` and the
//! exact [`BigRational`]); the strong-law layers use `f64`.

pub mod capacity;
pub mod dependence;
pub mod error;
pub mod expectation;
pub mod model;
pub mod report;
pub mod scalar;
pub mod serial;
pub mod simulate;
pub mod slln;

pub use num_rational::BigRational;

pub use error::{Error, Result};
pub use model::{CredalSet, Event, OutcomeSpace, ProbabilityMeasure, RandomVariable};
pub use scalar::{ratio, Scalar};

pub type CredalSetF64 = CredalSet<f64>;
pub type CredalSetF32 = CredalSet<f32>;
pub type CredalSetExact = CredalSet<BigRational>;
pub type RandomVariableF64 = RandomVariable<f64>;
pub type RandomVariableF32 = RandomVariable<f32>;
pub type RandomVariableExact = RandomVariable<BigRational>;
pub type ProbabilityMeasureF64 = ProbabilityMeasure<f64>;
pub type ProbabilityMeasureExact = ProbabilityMeasure<BigRational>;
pub type SequenceModelF64 = dependence::SequenceModel<f64>;
pub type SequenceModelExact = dependence::SequenceModel<BigRational>;
