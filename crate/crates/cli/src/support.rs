//! Input loading, scalar parsing and error/exit-code plumbing.

use std::fmt;
use std::path::Path;

use tradeoff_core::error::Error as CoreError;
use tradeoff_core::io::LoadedTable;
use tradeoff_core::scalar::{ApproxScalar, Scalar};
use tradeoff_core::table::{Candidate, ObjectiveTable};
use tradeoff_core::{ExactScalar, Ext};

/// Exit codes: 0 success, 2 input error, 3 theorem-violation assertion
/// (an implementation-bug indicator, never a data problem).
#[derive(Debug)]
pub enum CliError {
    Core(CoreError),
    Io(std::io::Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::TheoremViolation(_)) => 3,
            _ => 2,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn parse_scalar<S: Scalar>(text: &str, tol: f64) -> CliResult<S> {
    S::parse(text, tol).map_err(CliError::from)
}

pub fn parse_scalars<S: Scalar>(texts: &[String], tol: f64) -> CliResult<Vec<S>> {
    texts.iter().map(|t| parse_scalar(t, tol)).collect()
}

/// Parses `start:end:count` into a strictly increasing grid of `count`
/// points.
pub fn parse_grid_spec<S: Scalar>(spec: &str, tol: f64) -> CliResult<Vec<S>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "grid spec {spec:?} must be start:end:count"
        )));
    }
    let start: S = parse_scalar(parts[0], tol)?;
    let end: S = parse_scalar(parts[1], tol)?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::usage(format!("bad grid count in {spec:?}")))?;
    if count < 2 {
        return Err(CliError::usage("grid needs at least 2 points"));
    }
    let den = S::from_int((count - 1) as i64);
    let span = end - start.clone();
    Ok((0..count)
        .map(|k| start.clone() + span.clone() * S::from_int(k as i64) / den.clone())
        .collect())
}

/// Parses `lo:hi` into a pair.
pub fn parse_window<S: Scalar>(spec: &str, tol: f64) -> CliResult<(S, S)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 2 {
        return Err(CliError::usage(format!("window {spec:?} must be lo:hi")));
    }
    Ok((parse_scalar(parts[0], tol)?, parse_scalar(parts[1], tol)?))
}

pub fn exact_to_approx(
    table: &ObjectiveTable<ExactScalar>,
    tol: f64,
) -> ObjectiveTable<ApproxScalar> {
    let candidates = table
        .candidates()
        .iter()
        .map(|c| Candidate {
            id: c.id.clone(),
            point: c.point.clone(),
            f: match c.f.finite() {
                Some(v) => Ext::Finite(ApproxScalar::new(v.to_f64(), tol)),
                None => Ext::PosInf,
            },
            g: c.g
                .iter()
                .map(|g| ApproxScalar::new(g.to_f64(), tol))
                .collect(),
        })
        .collect();
    ObjectiveTable::new(table.m(), candidates).expect("conversion preserves table shape")
}

/// Builds a named fixture table (always exact).
pub fn fixture_table(which: &str, n: usize, side: usize) -> CliResult<ObjectiveTable<ExactScalar>> {
    match which {
        "halfsum" => Ok(tradeoff_core::fixtures::halfsum(n)),
        "halfsum-g2" => Ok(tradeoff_core::fixtures::halfsum_with_trivial_g2(n)),
        "penalty-grid" => Ok(tradeoff_core::fixtures::penalty_grid(side)),
        other => Err(CliError::usage(format!(
            "unknown fixture {other:?} (expected halfsum, halfsum-g2 or penalty-grid)"
        ))),
    }
}

/// Resolves `--table` / `--fixture` into a loaded table on the requested
/// backend. Files carry their own backend; `--backend approx` downgrades an
/// exact source, while an approx file cannot be promoted to exact.
pub fn load_table(
    table_path: Option<&Path>,
    fixture: Option<&str>,
    n: usize,
    side: usize,
    want_approx: bool,
    tol: f64,
) -> CliResult<LoadedTable> {
    let loaded = match (table_path, fixture) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            tradeoff_core::io::table_from_str(&text, tol)?
        }
        (None, Some(name)) => LoadedTable::Exact(fixture_table(name, n, side)?),
        (None, None) => {
            return Err(CliError::usage(
                "no input: pass --table <file> or --fixture <name>",
            ))
        }
        (Some(_), Some(_)) => return Err(CliError::usage("--table and --fixture are exclusive")),
    };
    match (loaded, want_approx) {
        (LoadedTable::Exact(t), true) => Ok(LoadedTable::Approx(exact_to_approx(&t, tol))),
        (LoadedTable::Approx(_), false) => Err(CliError::usage(
            "table file uses the approx backend; rerun with --backend approx",
        )),
        (loaded, _) => Ok(loaded),
    }
}
