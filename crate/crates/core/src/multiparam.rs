//! Multi-regularizer scans.
//!
//! With `m >= 2` weights the exceptional set can be uncountable (a single
//! one-parameter kink sweeps out a whole hyperplane when a trivial
//! regularizer is added), but it stays Lebesgue-null: every axis-parallel
//! line meets it in at most `n - 1` points. This module verifies exactly that
//! structure: it slices the table along one axis (absorbing the other weights
//! into the intercept), runs the one-parameter analysis on each slice, and
//! aggregates per-line counts plus a shrinking exceptional-cell fraction.
//! Concavity and semicontinuity of the value function are checked on the same
//! grids.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::envelope::{build_envelope, ConcavePLFunction};
use crate::error::{Error, Result};
use crate::invariance::{self, InvarianceReport};
use crate::scalar::Scalar;
use crate::table::{Candidate, ObjectiveTable};

/// Product grid of parameter values, one strictly increasing axis per
/// regularizer. Iteration order is lexicographic with the last axis fastest.
#[derive(Debug, Clone)]
pub struct AlphaGrid<S> {
    axes: Vec<Vec<S>>,
}

impl<S: Scalar> AlphaGrid<S> {
    pub fn new(axes: Vec<Vec<S>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidGrid("no axes".into()));
        }
        for (j, axis) in axes.iter().enumerate() {
            if axis.len() < 2 {
                return Err(Error::InvalidGrid(format!(
                    "axis {j} needs at least 2 points"
                )));
            }
            if axis[0].is_negative() {
                return Err(Error::InvalidGrid(format!("axis {j} has negative points")));
            }
            for w in axis.windows(2) {
                if !w[0].is_lt(&w[1]) {
                    return Err(Error::InvalidGrid(format!(
                        "axis {j} is not strictly increasing"
                    )));
                }
            }
        }
        Ok(AlphaGrid { axes })
    }

    /// Uniform grid over `[0, ends[j]]` with `counts[j]` points per axis.
    pub fn uniform(ends: &[S], counts: &[usize]) -> Result<Self> {
        if ends.len() != counts.len() {
            return Err(Error::InvalidGrid("ends/counts length mismatch".into()));
        }
        let axes = ends
            .iter()
            .zip(counts)
            .map(|(end, &count)| {
                if count < 2 {
                    return Err(Error::InvalidGrid("need at least 2 points".into()));
                }
                let den = S::from_int((count - 1) as i64);
                Ok((0..count)
                    .map(|k| end.clone() * S::from_int(k as i64) / den.clone())
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        AlphaGrid::new(axes)
    }

    pub fn m(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, j: usize) -> Result<&[S]> {
        self.axes
            .get(j)
            .map(Vec::as_slice)
            .ok_or(Error::AxisOutOfRange {
                axis: j,
                m: self.axes.len(),
            })
    }

    /// All grid points in lexicographic order.
    pub fn points(&self) -> Vec<Vec<S>> {
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.axes.len()];
        loop {
            out.push(
                idx.iter()
                    .zip(&self.axes)
                    .map(|(&i, axis)| axis[i].clone())
                    .collect(),
            );
            // odometer, last axis fastest
            let mut d = self.axes.len();
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < self.axes[d].len() {
                    break;
                }
                idx[d] = 0;
            }
        }
    }

    /// Fixed-coordinate combinations for lines parallel to `axis`, i.e. the
    /// lexicographic product of every other axis. Entry `i` of a combination
    /// is the value for axis `i` if `i < axis`, else for axis `i + 1`.
    pub fn lines(&self, axis: usize) -> Result<Vec<Vec<S>>> {
        if axis >= self.axes.len() {
            return Err(Error::AxisOutOfRange {
                axis,
                m: self.axes.len(),
            });
        }
        let others: Vec<&Vec<S>> = self
            .axes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != axis)
            .map(|(_, a)| a)
            .collect();
        let mut out = vec![Vec::new()];
        for axis_points in others {
            let mut next = Vec::with_capacity(out.len() * axis_points.len());
            for prefix in &out {
                for p in axis_points {
                    let mut row = prefix.clone();
                    row.push(p.clone());
                    next.push(row);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// A one-parameter restriction of a multi-regularizer table: all weights but
/// one are frozen and absorbed into the intercept.
#[derive(Debug, Clone)]
pub struct Slice<S> {
    pub axis: usize,
    pub fixed: Vec<S>,
    /// Merged table: `f' = f + sum_{i != axis} fixed_i * g_i`, slope `g_axis`.
    pub table: ObjectiveTable<S>,
    pub env: ConcavePLFunction<S>,
}

/// Builds the 1-D envelope of the table along `axis` with the remaining
/// coordinates frozen at `fixed` (in axis order, skipping `axis`). Every
/// one-parameter operation applies to the result.
pub fn slice_envelope<S: Scalar>(
    table: &ObjectiveTable<S>,
    axis: usize,
    fixed: &[S],
) -> Result<Slice<S>> {
    let m = table.m();
    if axis >= m {
        return Err(Error::AxisOutOfRange { axis, m });
    }
    if fixed.len() != m - 1 {
        return Err(Error::DimensionMismatch {
            expected: m - 1,
            got: fixed.len(),
        });
    }
    for w in fixed {
        if w.is_negative() {
            return Err(Error::NegativeAlpha {
                alpha: w.to_string(),
            });
        }
    }
    let merged = table
        .candidates()
        .iter()
        .map(|c| {
            let mut f = c.f.clone();
            let mut k = 0;
            for (i, g) in c.g.iter().enumerate() {
                if i == axis {
                    continue;
                }
                f = f.add_finite(&(fixed[k].clone() * g.clone()));
                k += 1;
            }
            Candidate {
                id: c.id.clone(),
                point: c.point.clone(),
                f,
                g: vec![c.g[axis].clone()],
            }
        })
        .collect();
    let table1 = ObjectiveTable::new(1, merged)?;
    let env = build_envelope(&table1)?;
    Ok(Slice {
        axis,
        fixed: fixed.to_vec(),
        table: table1,
        env,
    })
}

/// A slice together with its exceptional set.
#[derive(Debug, Clone)]
pub struct SliceReport<S> {
    pub axis: usize,
    pub fixed: Vec<S>,
    pub exceptional: Vec<InvarianceReport<S>>,
}

pub fn slice_report<S: Scalar>(
    table: &ObjectiveTable<S>,
    axis: usize,
    fixed: &[S],
) -> Result<SliceReport<S>> {
    let slice = slice_envelope(table, axis, fixed)?;
    let exceptional = invariance::exceptional_set(&slice.table, &slice.env)?;
    Ok(SliceReport {
        axis,
        fixed: fixed.to_vec(),
        exceptional,
    })
}

/// Outcome of the concavity midpoint test.
#[derive(Debug, Clone)]
pub struct ConcavityVerdict {
    pub trials: usize,
    pub seed: u64,
    /// Trials where the inequality held with equality (affine stretches).
    pub equalities: usize,
}

/// Samples random grid-point pairs and rational mixing weights and asserts
/// `H(theta a + (1-theta) a') >= theta H(a) + (1-theta) H(a')` exactly, with
/// the value function computed by direct table minimization.
pub fn concavity_check<S: Scalar>(
    table: &ObjectiveTable<S>,
    grid: &AlphaGrid<S>,
    trials: usize,
    seed: u64,
) -> Result<ConcavityVerdict> {
    if grid.m() != table.m() {
        return Err(Error::DimensionMismatch {
            expected: table.m(),
            got: grid.m(),
        });
    }
    let points = grid.points();
    let thetas = [
        S::from_ratio(1, 4),
        S::from_ratio(1, 2),
        S::from_ratio(3, 4),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equalities = 0;
    for _ in 0..trials {
        let a = &points[rng.gen_range(0..points.len())];
        let b = &points[rng.gen_range(0..points.len())];
        let theta = &thetas[rng.gen_range(0..thetas.len())];
        let one_minus = S::one() - theta.clone();
        let mix: Vec<S> = a
            .iter()
            .zip(b)
            .map(|(x, y)| theta.clone() * x.clone() + one_minus.clone() * y.clone())
            .collect();
        let h_mix = table.min_at(&mix)?.value;
        let h_a = table.min_at(a)?.value;
        let h_b = table.min_at(b)?.value;
        let rhs = theta.clone() * h_a + one_minus.clone() * h_b;
        if h_mix.is_lt(&rhs) {
            return Err(Error::TheoremViolation(format!(
                "concavity failed: H(mix) = {h_mix} < {rhs}"
            )));
        }
        if h_mix.is_eq(&rhs) {
            equalities += 1;
        }
    }
    Ok(ConcavityVerdict {
        trials,
        seed,
        equalities,
    })
}

/// Exceptional values found on one grid line.
#[derive(Debug, Clone)]
pub struct LineSummary<S> {
    pub fixed: Vec<S>,
    pub alphas: Vec<S>,
}

/// Per-line exceptional structure along one axis, with the measure-zero
/// diagnostics.
#[derive(Debug, Clone)]
pub struct ExceptionalMeasure<S> {
    pub axis: usize,
    pub lines: Vec<LineSummary<S>>,
    pub max_count: usize,
    /// Each line meets the exceptional set in finitely many points, so its
    /// one-dimensional Lebesgue measure is 0 on every line and the iterated
    /// integral vanishes identically.
    pub measure_estimate: S,
    /// For each requested refinement `R`: the fraction of axis cells (width
    /// `(hi - lo) / R`) containing at least one exceptional value of some
    /// line. Shrinks as `R` grows.
    pub cell_fractions: Vec<(usize, S)>,
}

/// Scans every grid line parallel to `axis`, extracting each slice's exact
/// exceptional set restricted to the axis range of the grid.
pub fn exceptional_measure<S: Scalar>(
    table: &ObjectiveTable<S>,
    grid: &AlphaGrid<S>,
    axis: usize,
    refinements: &[usize],
) -> Result<ExceptionalMeasure<S>> {
    if grid.m() != table.m() {
        return Err(Error::DimensionMismatch {
            expected: table.m(),
            got: grid.m(),
        });
    }
    let axis_points = grid.axis(axis)?;
    let lo = axis_points.first().unwrap().clone();
    let hi = axis_points.last().unwrap().clone();
    let mut lines = Vec::new();
    let mut max_count = 0;
    for fixed in grid.lines(axis)? {
        let report = slice_report(table, axis, &fixed)?;
        let alphas: Vec<S> = report
            .exceptional
            .iter()
            .map(|r| r.alpha.clone())
            .filter(|a| a.is_ge(&lo) && a.is_le(&hi))
            .collect();
        max_count = max_count.max(alphas.len());
        lines.push(LineSummary { fixed, alphas });
    }
    // union of exceptional values over all lines (sorted, deduplicated)
    let mut union: Vec<S> = Vec::new();
    for line in &lines {
        for a in &line.alphas {
            if !union.iter().any(|u| u.is_eq(a)) {
                union.push(a.clone());
            }
        }
    }
    union.sort_by(|a, b| a.key_cmp(b));
    let width_total = hi.clone() - lo.clone();
    let mut cell_fractions = Vec::with_capacity(refinements.len());
    for &r in refinements {
        if r == 0 {
            return Err(Error::InvalidGrid("refinement of 0 cells".into()));
        }
        let mut marked = vec![false; r];
        for v in &union {
            let t = (v.clone() - lo.clone()) * S::from_int(r as i64) / width_total.clone();
            let mut k = t.to_f64().floor() as i64;
            k = k.clamp(0, r as i64 - 1);
            // fix up the float hint with exact comparisons
            while k + 1 < r as i64 && S::from_int(k + 1).is_le(&t) {
                k += 1;
            }
            while k > 0 && S::from_int(k).is_gt(&t) {
                k -= 1;
            }
            marked[k as usize] = true;
        }
        let count = marked.iter().filter(|&&b| b).count();
        cell_fractions.push((r, S::from_ratio(count as i64, r as i64)));
    }
    Ok(ExceptionalMeasure {
        axis,
        lines,
        max_count,
        measure_estimate: S::zero(),
        cell_fractions,
    })
}

/// Outcome of the semicontinuity and boundedness scan along one axis.
#[derive(Debug, Clone)]
pub struct SemicontinuityVerdict<S> {
    pub axis: usize,
    pub lines: usize,
    pub breakpoints_checked: usize,
    /// The uniform bound `max_u |g_axis(u)|`.
    pub bound: S,
}

/// Along every grid line parallel to `axis`, checks at each slice breakpoint
/// that `G^+` is left-continuous and `G^-` right-continuous (their values
/// at the breakpoint equal the adjacent segment constants), and that all
/// limiting values obey the uniform bound `|G^+-/-| <= max |g_axis|`.
pub fn semicontinuity_check<S: Scalar>(
    table: &ObjectiveTable<S>,
    grid: &AlphaGrid<S>,
    axis: usize,
) -> Result<SemicontinuityVerdict<S>> {
    if grid.m() != table.m() {
        return Err(Error::DimensionMismatch {
            expected: table.m(),
            got: grid.m(),
        });
    }
    let bound = table.max_abs_g(axis)?;
    let mut lines = 0;
    let mut breakpoints_checked = 0;
    for fixed in grid.lines(axis)? {
        lines += 1;
        let slice = slice_envelope(table, axis, &fixed)?;
        let step = invariance::g_step(&slice.env);
        for (k, (plus, minus)) in step.pairs.iter().enumerate() {
            breakpoints_checked += 1;
            // left-continuity of G^+: its breakpoint value is the constant of
            // the segment on the left
            if !plus.is_eq(&step.values[k]) {
                return Err(Error::TheoremViolation(format!(
                    "G^+ not left-continuous at breakpoint {} of slice {:?}",
                    step.breakpoints[k], fixed
                )));
            }
            // right-continuity of G^-
            if !minus.is_eq(&step.values[k + 1]) {
                return Err(Error::TheoremViolation(format!(
                    "G^- not right-continuous at breakpoint {} of slice {:?}",
                    step.breakpoints[k], fixed
                )));
            }
        }
        for v in step
            .values
            .iter()
            .chain(step.pairs.iter().flat_map(|(p, m)| [p, m]))
        {
            if v.abs_val().is_gt(&bound) {
                return Err(Error::TheoremViolation(format!(
                    "limiting value {v} exceeds the uniform bound {bound}"
                )));
            }
        }
    }
    Ok(SemicontinuityVerdict {
        axis,
        lines,
        breakpoints_checked,
        bound,
    })
}
