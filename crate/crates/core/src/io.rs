//! Wire formats.
//!
//! Table files, envelope exports and analysis reports all travel as JSON (or
//! CSV for flat listings). Exact scalars serialize as `"p/q"` strings so that
//! a load/export/load round trip reproduces identical values; approximate
//! scalars serialize as plain numbers. A reserved `"+inf"` value is accepted
//! for the fidelity column `f` only.

use serde_json::{json, Map, Value};

use crate::critpoints::CriticalReport;
use crate::envelope::ConcavePLFunction;
use crate::error::{Error, Result};
use crate::invariance::{
    DerivativeReport, EpsSequence, GStepFunction, InvarianceReport, SequenceVerdict,
};
use crate::multiparam::{ExceptionalMeasure, LineSummary};
use crate::scalar::{ApproxScalar, Backend, ExactScalar, Ext, Scalar, ScalarRepr};
use crate::table::{Candidate, MinResult, ObjectiveTable};

/// How scalars render in outgoing reports: canonical `p/q` (or numbers on the
/// approx backend), or fixed-point decimals with the given digit count.
#[derive(Debug, Clone, Copy)]
pub enum NumStyle {
    Canonical,
    Decimal(usize),
}

pub fn scalar_value<S: Scalar>(v: &S, style: NumStyle) -> Value {
    match style {
        NumStyle::Decimal(digits) => Value::String(v.decimal(digits)),
        NumStyle::Canonical => match v.to_repr() {
            ScalarRepr::Text(s) => Value::String(s),
            ScalarRepr::Number(n) => serde_json::Number::from_f64(n)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(n.to_string())),
        },
    }
}

pub fn scalar_text<S: Scalar>(v: &S, style: NumStyle) -> String {
    match style {
        NumStyle::Decimal(digits) => v.decimal(digits),
        NumStyle::Canonical => v.to_string(),
    }
}

fn scalar_from_value<S: Scalar>(v: &Value, tol: f64) -> Result<S> {
    match v {
        Value::String(s) => S::from_repr(&ScalarRepr::Text(s.clone()), tol),
        Value::Number(n) => {
            let f = n.as_f64().ok_or_else(|| Error::ParseScalar {
                text: n.to_string(),
                detail: "not representable as binary64".into(),
            })?;
            S::from_repr(&ScalarRepr::Number(f), tol)
        }
        other => Err(Error::ParseScalar {
            text: other.to_string(),
            detail: "expected a string or number".into(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Table files
// ---------------------------------------------------------------------------

pub fn table_to_json<S: Scalar>(table: &ObjectiveTable<S>) -> Value {
    let candidates: Vec<Value> = table
        .candidates()
        .iter()
        .map(|c| {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::String(c.id.clone()));
            if let Some(point) = &c.point {
                obj.insert("u".into(), json!(point));
            }
            let f = match c.f.finite() {
                Some(v) => scalar_value(v, NumStyle::Canonical),
                None => Value::String("+inf".into()),
            };
            obj.insert("f".into(), f);
            obj.insert(
                "g".into(),
                Value::Array(
                    c.g.iter()
                        .map(|g| scalar_value(g, NumStyle::Canonical))
                        .collect(),
                ),
            );
            Value::Object(obj)
        })
        .collect();
    json!({
        "m": table.m(),
        "backend": table.backend().to_string(),
        "candidates": candidates,
    })
}

/// A table read from disk, on whichever backend the file declares.
pub enum LoadedTable {
    Exact(ObjectiveTable<ExactScalar>),
    Approx(ObjectiveTable<ApproxScalar>),
}

impl LoadedTable {
    pub fn backend(&self) -> Backend {
        match self {
            LoadedTable::Exact(_) => Backend::Exact,
            LoadedTable::Approx(_) => Backend::Approx,
        }
    }
}

fn candidates_from_json<S: Scalar>(m: usize, arr: &[Value], tol: f64) -> Result<ObjectiveTable<S>> {
    let mut out = Vec::with_capacity(arr.len());
    for (i, cv) in arr.iter().enumerate() {
        let obj = cv
            .as_object()
            .ok_or_else(|| Error::Format(format!("candidate {i} is not an object")))?;
        let id = obj
            .get("id")
            .and_then(Value::as_str)
            .map(str::to_owned)
            .unwrap_or_else(|| i.to_string());
        let point = match obj.get("u") {
            None | Some(Value::Null) => None,
            Some(Value::Array(xs)) => {
                let coords = xs
                    .iter()
                    .map(|x| {
                        x.as_f64()
                            .ok_or_else(|| Error::Format(format!("candidate {i}: bad coordinate")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Some(coords)
            }
            Some(other) => {
                return Err(Error::Format(format!(
                    "candidate {i}: field \"u\" must be an array, got {other}"
                )))
            }
        };
        let f_value = obj
            .get("f")
            .ok_or_else(|| Error::Format(format!("candidate {i} ({id}): missing field \"f\"")))?;
        let f =
            match f_value.as_str() {
                Some("+inf") | Some("inf") => Ext::PosInf,
                _ => Ext::Finite(scalar_from_value::<S>(f_value, tol).map_err(|e| {
                    Error::Format(format!("candidate {i} ({id}), field \"f\": {e}"))
                })?),
            };
        let g_arr = obj
            .get("g")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format(format!("candidate {i} ({id}): missing array \"g\"")))?;
        if g_arr.len() != m {
            return Err(Error::Format(format!(
                "candidate {i} ({id}): expected {m} regularizer values, got {}",
                g_arr.len()
            )));
        }
        let g = g_arr
            .iter()
            .enumerate()
            .map(|(j, gv)| {
                scalar_from_value::<S>(gv, tol)
                    .map_err(|e| Error::Format(format!("candidate {i} ({id}), g[{j}]: {e}")))
            })
            .collect::<Result<Vec<S>>>()?;
        out.push(Candidate { id, point, f, g });
    }
    ObjectiveTable::new(m, out)
}

pub fn table_from_json(v: &Value, tol: f64) -> Result<LoadedTable> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Format("table file must be a JSON object".into()))?;
    let m = obj
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Format("missing integer field \"m\"".into()))? as usize;
    let backend = obj
        .get("backend")
        .and_then(Value::as_str)
        .unwrap_or("exact");
    let arr = obj
        .get("candidates")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("missing array \"candidates\"".into()))?;
    match backend {
        "exact" => Ok(LoadedTable::Exact(candidates_from_json(m, arr, tol)?)),
        "approx" => Ok(LoadedTable::Approx(candidates_from_json(m, arr, tol)?)),
        other => Err(Error::Format(format!(
            "unknown backend {other:?} (expected \"exact\" or \"approx\")"
        ))),
    }
}

pub fn table_from_str(text: &str, tol: f64) -> Result<LoadedTable> {
    let v: Value = serde_json::from_str(text)?;
    table_from_json(&v, tol)
}

// ---------------------------------------------------------------------------
// Envelope and report exports
// ---------------------------------------------------------------------------

pub fn envelope_to_json<S: Scalar>(env: &ConcavePLFunction<S>, style: NumStyle) -> Value {
    json!({
        "anchor": scalar_value(&env.anchor(), style),
        "breakpoints": env.breakpoints().iter().map(|b| scalar_value(b, style)).collect::<Vec<_>>(),
        "slopes": env.segment_slopes().iter().map(|s| scalar_value(s, style)).collect::<Vec<_>>(),
        "active": env.active(),
        "domain_end": match env.domain_end() {
            Some(end) => scalar_value(end, style),
            None => Value::String("inf".into()),
        },
    })
}

pub fn report_to_json<S: Scalar>(
    report: &InvarianceReport<S>,
    table: &ObjectiveTable<S>,
    style: NumStyle,
) -> Value {
    let ids: Vec<&str> = report
        .argmin
        .iter()
        .map(|&i| table.candidates()[i].id.as_str())
        .collect();
    json!({
        "alpha": scalar_value(&report.alpha, style),
        "argmin": ids,
        "g_min": scalar_value(&report.g_min, style),
        "g_max": scalar_value(&report.g_max, style),
        "g_plus": scalar_value(&report.g_plus, style),
        "g_minus": scalar_value(&report.g_minus, style),
        "exceptional": report.exceptional,
    })
}

/// CSV listing of an exceptional set: `alpha,g_plus,g_minus,spread`.
pub fn exceptional_csv<S: Scalar>(reports: &[InvarianceReport<S>], style: NumStyle) -> String {
    let mut out = String::from("alpha,g_plus,g_minus,spread\n");
    for r in reports {
        let spread = r.g_max.clone() - r.g_min.clone();
        out.push_str(&format!(
            "{},{},{},{}\n",
            scalar_text(&r.alpha, style),
            scalar_text(&r.g_plus, style),
            scalar_text(&r.g_minus, style),
            scalar_text(&spread, style),
        ));
    }
    out
}

pub fn gstep_to_json<S: Scalar>(step: &GStepFunction<S>, style: NumStyle) -> Value {
    json!({
        "breakpoints": step.breakpoints.iter().map(|b| scalar_value(b, style)).collect::<Vec<_>>(),
        "values": step.values.iter().map(|v| scalar_value(v, style)).collect::<Vec<_>>(),
        "pairs": step.pairs.iter()
            .map(|(p, m)| vec![scalar_value(p, style), scalar_value(m, style)])
            .collect::<Vec<_>>(),
        "domain_end": match &step.domain_end {
            Some(end) => scalar_value(end, style),
            None => Value::String("inf".into()),
        },
    })
}

pub fn derivative_report_to_json<S: Scalar>(
    report: &DerivativeReport<S>,
    style: NumStyle,
) -> Value {
    json!({
        "alpha": scalar_value(&report.alpha, style),
        "g_plus": scalar_value(&report.g_plus, style),
        "g_minus": scalar_value(&report.g_minus, style),
        "derivative_exists": report.derivative_exists,
        "exceptional": report.exceptional,
        "quotients": report.samples.iter().map(|s| json!({
            "h": scalar_value(&s.h, style),
            "left": s.left.as_ref().map(|v| scalar_value(v, style)),
            "right": s.right.as_ref().map(|v| scalar_value(v, style)),
            "clean": s.clean,
        })).collect::<Vec<_>>(),
    })
}

pub fn sequence_to_json<S: Scalar>(
    seq: &EpsSequence<S>,
    table: &ObjectiveTable<S>,
    verdict: Option<&SequenceVerdict<S>>,
    style: NumStyle,
) -> Value {
    let entries: Vec<Value> = seq
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "i": i,
                "eps": scalar_value(&e.eps, style),
                "candidate": table.candidates()[e.candidate].id,
                "h": scalar_value(&e.h_value, style),
                "g": scalar_value(&e.g_value, style),
            })
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("alpha".into(), scalar_value(&seq.alpha, style));
    obj.insert("policy".into(), Value::String(seq.policy.name().into()));
    if let Some(seed) = seq.seed {
        obj.insert("seed".into(), json!(seed));
    }
    obj.insert("entries".into(), Value::Array(entries));
    if let Some(v) = verdict {
        obj.insert(
            "verdict".into(),
            json!({
                "bracket": [scalar_value(&v.bracket.0, style), scalar_value(&v.bracket.1, style)],
                "tail_start": v.tail_start,
                "bracket_ok": v.bracket_ok,
                "eventually_constant": v.eventually_constant,
                "tail_min": v.tail_min.as_ref().map(|x| scalar_value(x, style)),
                "tail_max": v.tail_max.as_ref().map(|x| scalar_value(x, style)),
                "pass": v.pass,
            }),
        );
    }
    Value::Object(obj)
}

// ---------------------------------------------------------------------------
// Multi-parameter exports
// ---------------------------------------------------------------------------

/// Per-slice CSV: `fixed,exceptional_alphas,count` with semicolon-joined
/// lists inside the first two columns.
pub fn slices_csv<S: Scalar>(lines: &[LineSummary<S>], style: NumStyle) -> String {
    let mut out = String::from("fixed,exceptional_alphas,count\n");
    for line in lines {
        let fixed = line
            .fixed
            .iter()
            .map(|v| scalar_text(v, style))
            .collect::<Vec<_>>()
            .join(";");
        let alphas = line
            .alphas
            .iter()
            .map(|v| scalar_text(v, style))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!("{fixed},{alphas},{}\n", line.alphas.len()));
    }
    out
}

/// Scan summary. `axis_label` is the user-facing (1-based) axis number.
pub fn measure_to_json<S: Scalar>(
    measure: &ExceptionalMeasure<S>,
    axis_label: usize,
    style: NumStyle,
) -> Value {
    json!({
        "axis": axis_label,
        "lines": measure.lines.len(),
        "max_count": measure.max_count,
        "measure_estimate": scalar_value(&measure.measure_estimate, style),
        "cell_fraction": measure.cell_fractions.iter()
            .map(|(r, f)| json!({"cells_per_axis": r, "fraction": scalar_value(f, style)}))
            .collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Critical-point exports
// ---------------------------------------------------------------------------

pub fn critical_report_to_json(report: &CriticalReport, style: NumStyle) -> Value {
    json!({
        "alpha": scalar_value(&report.alpha, style),
        "points": report.points.iter().map(|p| json!({
            "interval": [scalar_text(&p.interval.lo, style), scalar_text(&p.interval.hi, style)],
            "h": [scalar_text(&p.h.lo, style), scalar_text(&p.h.hi, style)],
            "g": [scalar_text(&p.g.lo, style), scalar_text(&p.g.hi, style)],
        })).collect::<Vec<_>>(),
        "groups": report.groups.iter().map(|g| json!({
            "members": g.members,
            "violations": g.violations.iter().map(|v| json!({
                "i": v.i,
                "j": v.j,
                "gap": scalar_text(&v.gap, style),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "flagged": report.flagged,
    })
}

// ---------------------------------------------------------------------------
// Penalty-demo export
// ---------------------------------------------------------------------------

/// One row of a penalty sweep.
pub fn penalty_row_to_json<S: Scalar>(
    alpha: &S,
    min: &MinResult<S>,
    report: &InvarianceReport<S>,
    table: &ObjectiveTable<S>,
    style: NumStyle,
) -> Value {
    let ids: Vec<&str> = min
        .argmin
        .iter()
        .map(|&i| table.candidates()[i].id.as_str())
        .collect();
    json!({
        "alpha": scalar_value(alpha, style),
        "h_value": scalar_value(&min.value, style),
        "argmin": ids,
        "g_min": scalar_value(&report.g_min, style),
        "g_max": scalar_value(&report.g_max, style),
        "exceptional": report.exceptional,
    })
}
