//! Error type shared by every analysis module.

use thiserror::Error;

/// Errors produced by table construction, envelopes, scans and parsers.
///
/// `TheoremViolation` is special: it is only ever returned when a verified
/// mathematical identity fails on well-formed input, which indicates a bug in
/// this crate rather than in the caller's data. The command-line front end
/// maps it to a dedicated exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("table has no candidates")]
    EmptyTable,

    #[error("every candidate has an infinite objective value")]
    AllInfinite,

    #[error("candidate index {index} out of range for a table of {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("alpha has {got} coordinates but the table has {expected} regularizers")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("regularization weights must be nonnegative (got {alpha})")]
    NegativeAlpha { alpha: String },

    #[error("value function is -infinity beyond alpha = {domain_end} (queried {alpha})")]
    UnboundedBelow { domain_end: String, alpha: String },

    #[error("expected alpha1 < alpha2, got {alpha1} and {alpha2}")]
    UnorderedPair { alpha1: String, alpha2: String },

    #[error("alpha must be interior to the finite-value domain: {detail}")]
    NotInterior { detail: String },

    #[error("invalid epsilon schedule: {0}")]
    InvalidSchedule(String),

    #[error("sequence and report refer to different alpha values")]
    AlphaMismatch,

    #[error("sequence entry {index} is not an epsilon-minimizer: {detail}")]
    InvalidSequenceEntry { index: usize, detail: String },

    #[error(
        "derivative polynomial vanishes identically at alpha = {alpha}: every point is critical"
    )]
    DegenerateDerivative { alpha: String },

    #[error("axis {axis} out of range for {m} regularizers")]
    AxisOutOfRange { axis: usize, m: usize },

    #[error("invalid polynomial pair: {0}")]
    InvalidPolynomial(String),

    #[error("invalid ray domain: {0}")]
    InvalidRay(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("cannot parse scalar {text:?}: {detail}")]
    ParseScalar { text: String, detail: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("theorem violation (implementation bug): {0}")]
    TheoremViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
