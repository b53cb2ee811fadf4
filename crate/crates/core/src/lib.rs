//! Proportional-integral projected gradient (PIPG) solver for conic quadratic
//! programs of the form
//!
//! ```text
//! minimize    ½ zᵀ P z + qᵀ z
//! subject to  H z = g,  z ∈ D
//! ```
//!
//! with a QR-based preconditioner for the equality constraints, an adaptive
//! step-size rule, reference solvers for testing, and generators for two
//! model predictive control benchmarks.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod demo;
pub mod error;
pub mod linalg;
pub mod mpc;
pub mod oracle;
pub mod precond;
pub mod problem;
pub mod projections;
pub mod solver;

pub use error::{Error, Result};
pub use precond::{qr_precondition, PreconditionedProblem};
pub use problem::{CanonicalProblem, CostHessian, SpectralData};
pub use projections::{ProductSet, SetDescriptor};
pub use solver::{pipg_run, SolverConfig, SolverResult, StepSizes};
