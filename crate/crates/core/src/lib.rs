//! Universal unary functions over the positive integers, transforms of their
//! halting sets, and finite natural-density analysis.
//!
//! Programs are two-instruction counter machines ([`machine`]). The
//! [`universal`] module builds a base universal function `V` on top of the
//! machine numbering and derives the square-embedded, `phi`-pulled-back and
//! mixed variants from it. [`density`] and [`witness`] measure halting sets
//! and check almost-decidability witnesses against budgeted ground truth.

pub mod density;
pub mod encodings;
pub mod experiment;
pub mod machine;
pub mod sets;
pub mod universal;
pub mod witness;

pub use dashu_int::UBig;
pub use num_rational::Ratio;

pub use density::{DensityMode, DensityReport};
pub use machine::{EvalOutcome, GoedelIndex, Program};
pub use sets::{Predicate, PredicateError, SetSpec};
pub use universal::{Evaluator, UniversalSpec};
