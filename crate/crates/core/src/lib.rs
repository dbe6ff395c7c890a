//! Normal forms and one-sided extension verdicts for real quadratic cones in ℂⁿ.
//!
//! A cone is the zero set of `ρ(z) = Re(zᵀSz) + z*Hz`. For n = 2 the
//! [`normalform2`] classifier reduces ρ to one of seven normal forms and
//! [`decider`] turns the form into either an analytic-disc family (one-sided
//! extension) or a pair of supporting complex lines. For n ≥ 3 [`slicer`]
//! looks for a two-dimensional slice with a one-sided verdict, and otherwise
//! tries to recognise one of the two-sided model forms.

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decider;
pub mod error;
pub mod linalg;
pub mod normalform2;
pub mod quadform;
pub mod reduction2;
pub mod slicer;
pub mod tol;

pub mod cli;

pub use error::{Error, Result};
pub use quadform::QuadraticCone;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
