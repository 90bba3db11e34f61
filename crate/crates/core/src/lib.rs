//! Exact analysis of parametric regularized minimization.
//!
//! Given a finite candidate set with a fidelity value `f(u)` and regularizer
//! values `g_1(u) .. g_m(u)`, this crate studies the family
//! `H_alpha(u) = f(u) + sum_j alpha_j * g_j(u)` as the weights vary:
//!
//! * [`envelope`] builds the concave piecewise-linear value function
//!   `H(alpha) = min_u H_alpha(u)` and answers argmin queries exactly;
//! * [`invariance`] extracts the exceptional parameters where distinct
//!   minimizers disagree about the regularizer, the monotone step function of
//!   limiting regularizer values, one-sided derivative identities, and
//!   epsilon-minimizing-sequence checks;
//! * [`multiparam`] scans multi-regularizer problems along axis-parallel
//!   slices, verifying concavity, semicontinuity and the measure-zero
//!   structure of the exceptional set;
//! * [`critpoints`] runs the analogous analysis on critical points of
//!   univariate polynomial objectives, with certified root isolation;
//! * [`scalar`] provides the arbitrary-precision rational backend that makes
//!   all of the above exact (plus a tolerance-based float backend for
//!   indicative scans).
//!
//! Everything is immutable after construction and safe to share across
//! threads; all operations are pure functions.

pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod invariance;
pub mod io;
pub mod multiparam;
pub mod poly;
pub mod ray;
pub mod scalar;
pub mod table;

pub mod critpoints;

pub use envelope::{argmin_at, build_envelope, build_ray_envelope, ConcavePLFunction};
pub use error::{Error, Result};
pub use ray::PLRayDomain;
pub use scalar::{ApproxScalar, Backend, ExactScalar, Ext, Scalar};
pub use table::{Candidate, ObjectiveTable};
