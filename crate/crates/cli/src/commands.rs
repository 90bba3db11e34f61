//! Command implementations, generic over the scalar backend.

use rayon::prelude::*;
use serde_json::{json, Value};

use tradeoff_core::envelope::{build_envelope, ConcavePLFunction};
use tradeoff_core::error::Error as CoreError;
use tradeoff_core::invariance::{
    analyze_alpha, exceptional_set, g_step, generate_eps_sequence, verify_sequence_bracket,
    InvarianceReport, Policy,
};
use tradeoff_core::io::{self, NumStyle};
use tradeoff_core::multiparam::{
    concavity_check, exceptional_measure, semicontinuity_check, AlphaGrid,
};
use tradeoff_core::scalar::Scalar;
use tradeoff_core::table::ObjectiveTable;

use crate::support::{CliError, CliResult};

/// stdout text plus optional human-readable stderr notes.
pub struct Output {
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn json(v: &Value) -> Output {
        Output {
            stdout: format!("{:#}\n", v),
            stderr: String::new(),
        }
    }

    fn text(s: String) -> Output {
        Output {
            stdout: s,
            stderr: String::new(),
        }
    }
}

#[derive(Clone, Copy)]
pub enum Format {
    Json,
    Csv,
}

fn human_segment_table<S: Scalar>(env: &ConcavePLFunction<S>, style: NumStyle) -> String {
    let mut out = String::new();
    let bps = env.breakpoints();
    for (k, line) in env.lines().iter().enumerate() {
        let start = if k == 0 {
            "0".to_string()
        } else {
            io::scalar_text(&bps[k - 1], style)
        };
        let end = if k < bps.len() {
            io::scalar_text(&bps[k], style)
        } else {
            match env.domain_end() {
                Some(e) => io::scalar_text(e, style),
                None => "inf".to_string(),
            }
        };
        let active: Vec<String> = env.active()[k].iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "segment {k}: alpha in [{start}, {end})  slope {}  intercept {}  active {{{}}}\n",
            io::scalar_text(&line.slope, style),
            io::scalar_text(&line.intercept, style),
            active.join(", ")
        ));
    }
    if let Some(end) = env.domain_end() {
        out.push_str(&format!(
            "value function is -inf for alpha > {}\n",
            io::scalar_text(end, style)
        ));
    }
    out
}

pub fn cmd_envelope<S: Scalar>(
    table: &ObjectiveTable<S>,
    check_oracle: Option<usize>,
    style: NumStyle,
    format: Format,
) -> CliResult<Output> {
    let env = build_envelope(table)?;
    if let Some(points) = check_oracle {
        oracle_check(table, &env, points)?;
    }
    let mut out = match format {
        Format::Json => Output::json(&io::envelope_to_json(&env, style)),
        Format::Csv => {
            let mut csv = String::from("segment,start,end,slope,intercept\n");
            let bps = env.breakpoints();
            for (k, line) in env.lines().iter().enumerate() {
                let start = if k == 0 {
                    "0".into()
                } else {
                    io::scalar_text(&bps[k - 1], style)
                };
                let end = if k < bps.len() {
                    io::scalar_text(&bps[k], style)
                } else {
                    env.domain_end()
                        .map(|e| io::scalar_text(e, style))
                        .unwrap_or_else(|| "inf".into())
                };
                csv.push_str(&format!(
                    "{k},{start},{end},{},{}\n",
                    io::scalar_text(&line.slope, style),
                    io::scalar_text(&line.intercept, style)
                ));
            }
            Output::text(csv)
        }
    };
    out.stderr = human_segment_table(&env, style);
    Ok(out)
}

/// Compares envelope evaluation against direct table minimization on a dense
/// rational grid; any mismatch is an implementation bug (exit code 3).
fn oracle_check<S: Scalar>(
    table: &ObjectiveTable<S>,
    env: &ConcavePLFunction<S>,
    points: usize,
) -> CliResult<()> {
    let span_hint = env.breakpoints().last().cloned().unwrap_or_else(S::zero);
    let span = span_hint * S::from_int(2) + S::one();
    let den = S::from_int(points.max(2) as i64 - 1);
    let alphas: Vec<S> = (0..points.max(2))
        .map(|k| span.clone() * S::from_int(k as i64) / den.clone())
        .collect();
    let mismatches: usize = alphas
        .par_iter()
        .map(|alpha| {
            let direct = table
                .min_at(std::slice::from_ref(alpha))
                .expect("alpha is nonnegative");
            let via_env = env.value_at(alpha).expect("alpha is inside the domain");
            usize::from(!direct.value.is_eq(&via_env))
        })
        .sum();
    if mismatches > 0 {
        return Err(CoreError::TheoremViolation(format!(
            "envelope disagrees with direct minimization at {mismatches} of {points} probe points"
        ))
        .into());
    }
    eprintln!("oracle check: {points} probe points, 0 mismatches");
    Ok(())
}

pub fn cmd_exceptional<S: Scalar>(
    table: &ObjectiveTable<S>,
    style: NumStyle,
    format: Format,
) -> CliResult<Output> {
    let env = build_envelope(table)?;
    let reports = exceptional_set(table, &env)?;
    match format {
        Format::Csv => Ok(Output::text(io::exceptional_csv(&reports, style))),
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| io::report_to_json(r, table, style))
                .collect();
            Ok(Output::json(&Value::Array(rows)))
        }
    }
}

pub fn cmd_gstep<S: Scalar>(
    table: &ObjectiveTable<S>,
    style: NumStyle,
    format: Format,
) -> CliResult<Output> {
    let env = build_envelope(table)?;
    let step = g_step(&env);
    match format {
        Format::Json => Ok(Output::json(&io::gstep_to_json(&step, style))),
        Format::Csv => {
            let mut csv = String::from("start,end,g_value\n");
            for (k, v) in step.values.iter().enumerate() {
                let start = if k == 0 {
                    "0".into()
                } else {
                    io::scalar_text(&step.breakpoints[k - 1], style)
                };
                let end = if k < step.breakpoints.len() {
                    io::scalar_text(&step.breakpoints[k], style)
                } else {
                    step.domain_end
                        .as_ref()
                        .map(|e| io::scalar_text(e, style))
                        .unwrap_or_else(|| "inf".into())
                };
                csv.push_str(&format!("{start},{end},{}\n", io::scalar_text(v, style)));
            }
            Ok(Output::text(csv))
        }
    }
}

pub fn cmd_analyze<S: Scalar>(
    table: &ObjectiveTable<S>,
    alphas: &[S],
    style: NumStyle,
    format: Format,
) -> CliResult<Output> {
    let env = build_envelope(table)?;
    let mut sorted = alphas.to_vec();
    sorted.sort_by(|a, b| a.key_cmp(b));
    let reports: Vec<InvarianceReport<S>> = sorted
        .iter()
        .map(|a| analyze_alpha(table, &env, a))
        .collect::<Result<_, _>>()?;
    match format {
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| io::report_to_json(r, table, style))
                .collect();
            Ok(Output::json(&Value::Array(rows)))
        }
        Format::Csv => {
            let mut csv = String::from("alpha,argmin,g_min,g_max,g_plus,g_minus,exceptional\n");
            for r in &reports {
                let ids: Vec<&str> = r
                    .argmin
                    .iter()
                    .map(|&i| table.candidates()[i].id.as_str())
                    .collect();
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    io::scalar_text(&r.alpha, style),
                    ids.join(";"),
                    io::scalar_text(&r.g_min, style),
                    io::scalar_text(&r.g_max, style),
                    io::scalar_text(&r.g_plus, style),
                    io::scalar_text(&r.g_minus, style),
                    r.exceptional
                ));
            }
            Ok(Output::text(csv))
        }
    }
}

pub fn cmd_sequences<S: Scalar>(
    table: &ObjectiveTable<S>,
    alpha: &S,
    schedule: &[S],
    policy: Policy,
    seed: u64,
    style: NumStyle,
    format: Format,
) -> CliResult<Output> {
    let env = build_envelope(table)?;
    let seq = generate_eps_sequence(table, &env, alpha, schedule, policy, seed)?;
    let report = analyze_alpha(table, &env, alpha)?;
    let verdict = verify_sequence_bracket(table, &env, &seq, &report)?;
    match format {
        Format::Json => Ok(Output::json(&io::sequence_to_json(
            &seq,
            table,
            Some(&verdict),
            style,
        ))),
        Format::Csv => {
            let mut csv = String::from("i,eps,candidate,h,g\n");
            for (i, e) in seq.entries.iter().enumerate() {
                csv.push_str(&format!(
                    "{i},{},{},{},{}\n",
                    io::scalar_text(&e.eps, style),
                    table.candidates()[e.candidate].id,
                    io::scalar_text(&e.h_value, style),
                    io::scalar_text(&e.g_value, style)
                ));
            }
            Ok(Output::text(csv))
        }
    }
}

pub struct MultiscanArgs<S> {
    pub axis0: usize,
    pub grid: AlphaGrid<S>,
    pub refinements: Vec<usize>,
    pub concavity_trials: usize,
    pub seed: u64,
}

pub fn cmd_multiscan<S: Scalar>(
    table: &ObjectiveTable<S>,
    args: &MultiscanArgs<S>,
    style: NumStyle,
    format: Format,
) -> CliResult<Output> {
    let measure = exceptional_measure(table, &args.grid, args.axis0, &args.refinements)?;
    let semicontinuity = semicontinuity_check(table, &args.grid, args.axis0)?;
    let concavity = if args.concavity_trials > 0 {
        Some(concavity_check(
            table,
            &args.grid,
            args.concavity_trials,
            args.seed,
        )?)
    } else {
        None
    };
    match format {
        Format::Csv => Ok(Output::text(io::slices_csv(&measure.lines, style))),
        Format::Json => {
            let mut summary = io::measure_to_json(&measure, args.axis0 + 1, style);
            let obj = summary.as_object_mut().expect("summary is an object");
            obj.insert(
                "semicontinuity".into(),
                json!({
                    "lines": semicontinuity.lines,
                    "breakpoints_checked": semicontinuity.breakpoints_checked,
                    "bound": io::scalar_value(&semicontinuity.bound, style),
                    "pass": true,
                }),
            );
            if let Some(c) = concavity {
                obj.insert(
                    "concavity".into(),
                    json!({"trials": c.trials, "seed": c.seed, "pass": true}),
                );
            }
            Ok(Output::json(&summary))
        }
    }
}

pub fn cmd_penalty_demo<S: Scalar>(
    table: &ObjectiveTable<S>,
    alphas: &[S],
    style: NumStyle,
    format: Format,
) -> CliResult<Output> {
    let env = build_envelope(table)?;
    let mut sorted = alphas.to_vec();
    sorted.sort_by(|a, b| a.key_cmp(b));
    let rows: Vec<(S, tradeoff_core::table::MinResult<S>, InvarianceReport<S>)> = sorted
        .par_iter()
        .map(|alpha| {
            let min = table.min_at(std::slice::from_ref(alpha))?;
            let report = analyze_alpha(table, &env, alpha)?;
            Ok((alpha.clone(), min, report))
        })
        .collect::<Result<_, CoreError>>()?;
    // invariance verdict: off the exceptional set all minimizers must share
    // one constraint level, and levels must not increase with the weight
    let mut last: Option<S> = None;
    for (alpha, _, report) in &rows {
        if report.exceptional {
            continue;
        }
        if !report.g_min.is_eq(&report.g_max) {
            return Err(CoreError::TheoremViolation(format!(
                "non-exceptional alpha = {alpha} has a constraint-level spread"
            ))
            .into());
        }
        if let Some(prev) = &last {
            if report.g_min.is_gt(prev) {
                return Err(CoreError::TheoremViolation(format!(
                    "constraint level increased at alpha = {alpha}"
                ))
                .into());
            }
        }
        last = Some(report.g_min.clone());
    }
    match format {
        Format::Json => {
            let out = json!({
                "candidates": table.len(),
                "rows": rows.iter()
                    .map(|(a, min, r)| io::penalty_row_to_json(a, min, r, table, style))
                    .collect::<Vec<_>>(),
                "monotone": true,
            });
            Ok(Output::json(&out))
        }
        Format::Csv => {
            let mut csv = String::from("alpha,h_value,g_min,g_max,exceptional,argmin\n");
            for (a, min, r) in &rows {
                let ids: Vec<&str> = min
                    .argmin
                    .iter()
                    .map(|&i| table.candidates()[i].id.as_str())
                    .collect();
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    io::scalar_text(a, style),
                    io::scalar_text(&min.value, style),
                    io::scalar_text(&r.g_min, style),
                    io::scalar_text(&r.g_max, style),
                    r.exceptional,
                    ids.join(";")
                ));
            }
            Ok(Output::text(csv))
        }
    }
}

pub fn cmd_critpoints(
    f: &[String],
    g: &[String],
    window: (tradeoff_core::ExactScalar, tradeoff_core::ExactScalar),
    alphas: &[tradeoff_core::ExactScalar],
    equal_h_tol: &tradeoff_core::ExactScalar,
    style: NumStyle,
    format: Format,
) -> CliResult<Output> {
    use tradeoff_core::critpoints::{invariance_scan, PolynomialPair};
    use tradeoff_core::poly::Polynomial;
    use tradeoff_core::ExactScalar;

    let parse_coeffs = |texts: &[String]| -> CliResult<Polynomial> {
        let coeffs = texts
            .iter()
            .map(|t| ExactScalar::parse(t, 0.0).map_err(CliError::from))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Polynomial::new(coeffs))
    };
    let pair = PolynomialPair::new(parse_coeffs(f)?, parse_coeffs(g)?, window)?;
    let mut sorted = alphas.to_vec();
    sorted.sort_by(|a, b| a.key_cmp(b));
    let reports = invariance_scan(&pair, &sorted, equal_h_tol)?;
    match format {
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| io::critical_report_to_json(r, style))
                .collect();
            Ok(Output::json(&Value::Array(rows)))
        }
        Format::Csv => {
            let mut csv = String::from("alpha,points,groups,flagged,certified_gaps\n");
            for r in &reports {
                let gaps: Vec<String> = r
                    .groups
                    .iter()
                    .flat_map(|grp| &grp.violations)
                    .map(|v| io::scalar_text(&v.gap, style))
                    .collect();
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    io::scalar_text(&r.alpha, style),
                    r.points.len(),
                    r.groups.len(),
                    r.flagged,
                    gaps.join(";")
                ));
            }
            Ok(Output::text(csv))
        }
    }
}
