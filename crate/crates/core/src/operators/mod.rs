//! Differential operators of the model, their application to closed-form
//! states and to sampled grid functions, and identity verification.

pub mod catalog;
pub mod diffop;
pub mod expr;
pub mod grid;
pub mod identities;
pub mod probes;

pub use catalog::{build_operator, Operator, OperatorKind};
pub use diffop::{DiffOp1, DiffOp2, Field};
pub use expr::{BlockOp, OpExpr};
pub use grid::{inner_product, Grid2D, GridFunction};
pub use identities::{verify_identity, Identity, IdentityReport, Probe};
