//! Optimal polynomial approximants to `1/f` in the Hardy spaces `H^p`, `1 < p < inf`.
//!
//! Functions live on a uniform grid of the unit circle ([`boundary`]); the
//! approximants are computed by convex minimization ([`solver`]); the
//! orthogonality relations, bounds and closed-form root formulas that
//! accompany them are evaluated as checkable reports ([`orthogonality`],
//! [`bounds`], [`formulas`]); [`harness`] drives corpora, sweeps and the CLI.

// Negated comparisons are used deliberately so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod bounds;
pub mod error;
pub mod formulas;
pub mod fspec;
pub mod harness;
pub mod orthogonality;
pub mod roots;
pub mod solver;

pub use boundary::{
    BlaschkeProduct, BoundaryGrid, ComplexScalar, FunctionForm, HpFunction, TaylorPoly,
    DEFAULT_GRID,
};
pub use error::{OpaError, Result};
pub use solver::{LinearOpa, OpaResult, SolverOptions};
