//! Exactly solvable position-dependent-mass model on a semi-infinite layer:
//! closed-form spectra and eigenbases, operator algebra, mass-class
//! generation, and finite-difference oracles.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod error;
pub mod jet;
pub mod massgen;
pub mod model;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod special;

pub use error::{Error, Result};
