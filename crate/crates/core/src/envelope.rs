//! Lower envelopes of candidate lines.
//!
//! For one regularizer each candidate is an affine function of the parameter,
//! `alpha -> f + alpha * g`, and the value function is their pointwise
//! minimum over `alpha in [0, +inf)`: a concave piecewise-linear function
//! with strictly decreasing segment slopes. Construction is the classic
//! sort-by-slope-then-prune hull sweep in `O(n log n)`.
//!
//! Vertex argmin sets are the interesting objects here, so pruning is
//! deliberately conservative about identity: equal-slope lines keep only the
//! lowest intercept inside the envelope *structure*, but [`argmin_at`] always
//! rescans the full table and therefore sees every tying candidate, including
//! duplicates and lines that touch the envelope only at a vertex.

use crate::error::{Error, Result};
use crate::ray::PLRayDomain;
use crate::scalar::Scalar;
use crate::table::ObjectiveTable;

/// An affine function `alpha -> intercept + alpha * slope`.
#[derive(Debug, Clone)]
pub struct Line<S> {
    pub intercept: S,
    pub slope: S,
}

impl<S: Scalar> Line<S> {
    pub fn eval(&self, alpha: &S) -> S {
        self.intercept.clone() + alpha.clone() * self.slope.clone()
    }
}

/// Concave piecewise-linear value function on `[0, domain_end]`.
///
/// Segment `k` is the line `lines[k]`, valid from `breakpoints[k-1]` (or 0)
/// up to `breakpoints[k]` (or the domain end). Slopes strictly decrease,
/// adjacent segment values agree at each breakpoint, and every breakpoint is
/// strictly positive. A finite `domain_end` means the function is `-inf`
/// beyond it (only ray-domain envelopes produce this; finite tables are
/// bounded below for every parameter value).
#[derive(Debug, Clone)]
pub struct ConcavePLFunction<S> {
    lines: Vec<Line<S>>,
    breakpoints: Vec<S>,
    active: Vec<Vec<usize>>,
    domain_end: Option<S>,
}

/// Value and one-sided slopes of the envelope at a point.
///
/// `left_slope` is the left derivative (defined as the right derivative at
/// `alpha = 0`); `right_slope` is the right derivative, `None` exactly at a
/// finite domain end where the function drops to `-inf` on the right.
#[derive(Debug, Clone)]
pub struct EnvelopeEval<S> {
    pub value: S,
    pub left_slope: S,
    pub right_slope: Option<S>,
}

impl<S: Scalar> ConcavePLFunction<S> {
    fn assert_invariants(&self) {
        debug_assert_eq!(self.lines.len(), self.breakpoints.len() + 1);
        debug_assert_eq!(self.lines.len(), self.active.len());
        for w in self.lines.windows(2) {
            debug_assert!(w[1].slope.is_lt(&w[0].slope), "slopes must decrease");
        }
        for (k, b) in self.breakpoints.iter().enumerate() {
            debug_assert!(b.is_positive(), "breakpoints must be positive");
            let left = self.lines[k].eval(b);
            let right = self.lines[k + 1].eval(b);
            debug_assert!(left.is_eq(&right), "segments must agree at breakpoints");
        }
        if let Some(end) = &self.domain_end {
            if let Some(last) = self.breakpoints.last() {
                debug_assert!(last.is_lt(end));
            }
        }
    }

    /// `H(0)`: the envelope value at the left end of the domain.
    pub fn anchor(&self) -> S {
        self.lines[0].intercept.clone()
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn segment_count(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Line<S>] {
        &self.lines
    }

    pub fn segment_slopes(&self) -> Vec<S> {
        self.lines.iter().map(|l| l.slope.clone()).collect()
    }

    /// Candidate (or ray-vertex) indices active on each open segment.
    pub fn active(&self) -> &[Vec<usize>] {
        &self.active
    }

    pub fn domain_end(&self) -> Option<&S> {
        self.domain_end.as_ref()
    }

    fn check_in_domain(&self, alpha: &S) -> Result<()> {
        if alpha.is_negative() {
            return Err(Error::NegativeAlpha {
                alpha: alpha.to_string(),
            });
        }
        if let Some(end) = &self.domain_end {
            if alpha.is_gt(end) {
                return Err(Error::UnboundedBelow {
                    domain_end: end.to_string(),
                    alpha: alpha.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Index of the segment whose half-open interval contains `alpha`.
    pub fn segment_index(&self, alpha: &S) -> Result<usize> {
        self.check_in_domain(alpha)?;
        Ok(self.breakpoints.partition_point(|b| b.is_le(alpha)))
    }

    /// Is `alpha` one of the breakpoints?
    pub fn is_breakpoint(&self, alpha: &S) -> bool {
        self.breakpoints.iter().any(|b| b.is_eq(alpha))
    }

    /// Value and one-sided derivatives at `alpha`.
    pub fn evaluate(&self, alpha: &S) -> Result<EnvelopeEval<S>> {
        let seg = self.segment_index(alpha)?;
        let value = self.lines[seg].eval(alpha);
        // left slope: previous segment's slope when alpha sits on a breakpoint
        let at_breakpoint = seg > 0 && self.breakpoints[seg - 1].is_eq(alpha);
        let right_slope = match &self.domain_end {
            Some(end) if alpha.is_eq(end) => None,
            _ => Some(self.lines[seg].slope.clone()),
        };
        // segment interior, or the alpha = 0 boundary where the left
        // derivative is defined to equal the right one
        let left_slope = if at_breakpoint {
            self.lines[seg - 1].slope.clone()
        } else {
            self.lines[seg].slope.clone()
        };
        Ok(EnvelopeEval {
            value,
            left_slope,
            right_slope,
        })
    }

    /// Shorthand for `evaluate(alpha).value`.
    pub fn value_at(&self, alpha: &S) -> Result<S> {
        Ok(self.evaluate(alpha)?.value)
    }
}

/// Pending hull segment: a line plus the parameter where it becomes active
/// (`None` = active from `-inf`).
struct HullSeg<S> {
    line: Line<S>,
    start: Option<S>,
    rep: usize,
}

/// Sweeps lines sorted by decreasing slope, pruning dominated ones. Ties in
/// slope are resolved to the lowest intercept before the sweep. `x <= start`
/// pops, which collapses zero-length segments produced by three or more
/// concurrent lines into a single breakpoint.
fn hull_sweep<S: Scalar>(reps: Vec<(usize, Line<S>)>) -> Vec<HullSeg<S>> {
    let mut stack: Vec<HullSeg<S>> = Vec::with_capacity(reps.len());
    for (rep, line) in reps {
        loop {
            match stack.last() {
                None => {
                    stack.push(HullSeg {
                        line,
                        start: None,
                        rep,
                    });
                    break;
                }
                Some(top) => {
                    // intersection with the stack top; slopes strictly differ
                    let x = (line.intercept.clone() - top.line.intercept.clone())
                        / (top.line.slope.clone() - line.slope.clone());
                    let dominated = match &top.start {
                        Some(s) => x.is_le(s),
                        None => false,
                    };
                    if dominated {
                        stack.pop();
                        continue;
                    }
                    stack.push(HullSeg {
                        line,
                        start: Some(x),
                        rep,
                    });
                    break;
                }
            }
        }
    }
    stack
}

/// Drops hull segments that live entirely in `alpha < 0` and turns the rest
/// into a `ConcavePLFunction`, resolving per-segment active sets against the
/// full list of `(intercept, slope)` pairs.
///
/// Active sets are resolved by a single merge over the slope-sorted line list
/// (segments come out of the sweep in the same order), keeping the whole
/// construction at `O(n log n)`: every candidate whose line coincides with a
/// segment's line minimizes on that entire open segment.
fn finish_envelope<S: Scalar>(
    hull: Vec<HullSeg<S>>,
    all_lines: &[(usize, Line<S>)],
    domain_end: Option<S>,
) -> ConcavePLFunction<S> {
    let zero = S::zero();
    let mut first = 0;
    for (i, seg) in hull.iter().enumerate() {
        let starts_nonpositive = match &seg.start {
            None => true,
            Some(s) => s.is_le(&zero),
        };
        if starts_nonpositive {
            first = i;
        }
    }
    let kept = &hull[first..];

    let mut by_slope: Vec<&(usize, Line<S>)> = all_lines.iter().collect();
    by_slope.sort_by(|a, b| {
        b.1.slope
            .key_cmp(&a.1.slope)
            .then_with(|| a.1.intercept.key_cmp(&b.1.intercept))
            .then_with(|| a.0.cmp(&b.0))
    });

    let mut lines = Vec::with_capacity(kept.len());
    let mut breakpoints = Vec::with_capacity(kept.len().saturating_sub(1));
    let mut active = Vec::with_capacity(kept.len());
    let mut ptr = 0;
    for (i, seg) in kept.iter().enumerate() {
        if i > 0 {
            breakpoints.push(seg.start.clone().expect("interior segment has a start"));
        }
        // skip lines steeper than this segment (they belong to earlier ones)
        while ptr < by_slope.len()
            && by_slope[ptr].1.slope.key_cmp(&seg.line.slope) == std::cmp::Ordering::Greater
            && !by_slope[ptr].1.slope.is_eq(&seg.line.slope)
        {
            ptr += 1;
        }
        let mut ids = Vec::new();
        let mut k = ptr;
        while k < by_slope.len() && by_slope[k].1.slope.is_eq(&seg.line.slope) {
            if by_slope[k].1.intercept.is_eq(&seg.line.intercept) {
                ids.push(by_slope[k].0);
            }
            k += 1;
        }
        ids.sort_unstable();
        if ids.is_empty() {
            // approx backend can merge tolerance-close lines; fall back to
            // the representative the hull actually used
            ids.push(seg.rep);
        }
        lines.push(seg.line.clone());
        active.push(ids);
    }
    let env = ConcavePLFunction {
        lines,
        breakpoints,
        active,
        domain_end,
    };
    env.assert_invariants();
    env
}

fn envelope_of_lines<S: Scalar>(
    indexed: Vec<(usize, Line<S>)>,
    domain_end: Option<S>,
) -> ConcavePLFunction<S> {
    // sort by slope descending, intercept ascending
    let mut sorted = indexed.clone();
    sorted.sort_by(|a, b| {
        b.1.slope
            .key_cmp(&a.1.slope)
            .then_with(|| a.1.intercept.key_cmp(&b.1.intercept))
    });
    // one representative per slope class: the lowest intercept
    let mut reps: Vec<(usize, Line<S>)> = Vec::with_capacity(sorted.len());
    for (idx, line) in sorted {
        match reps.last() {
            Some((_, prev)) if prev.slope.is_eq(&line.slope) => {}
            _ => reps.push((idx, line)),
        }
    }
    let hull = hull_sweep(reps);
    finish_envelope(hull, &indexed, domain_end)
}

/// Builds the exact lower envelope of an `m = 1` table over `alpha >= 0`.
pub fn build_envelope<S: Scalar>(table: &ObjectiveTable<S>) -> Result<ConcavePLFunction<S>> {
    if table.m() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: table.m(),
        });
    }
    let indexed: Vec<(usize, Line<S>)> = table
        .candidates()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            c.f.finite().map(|f| {
                (
                    i,
                    Line {
                        intercept: f.clone(),
                        slope: c.g[0].clone(),
                    },
                )
            })
        })
        .collect();
    if indexed.is_empty() {
        return Err(Error::AllInfinite);
    }
    Ok(envelope_of_lines(indexed, None))
}

/// Value function of `min_{u >= 0} F(u) + alpha * c * u` for a piecewise
/// linear ray domain.
///
/// For every parameter value the minimum over the ray is attained at a vertex
/// `t_k` (or at 0), so the envelope is the lower envelope of the vertex lines
/// `alpha -> F(t_k) + (c * t_k) * alpha`. When `c < 0` the objective's final
/// slope `s_last + alpha * c` turns negative at `alpha = s_last / -c`; beyond
/// that the infimum is `-inf` and the returned function's domain ends there.
/// Active indices refer to ray vertices.
pub fn build_ray_envelope<S: Scalar>(ray: &PLRayDomain<S>) -> ConcavePLFunction<S> {
    let values = ray.vertex_values();
    let indexed: Vec<(usize, Line<S>)> = values
        .into_iter()
        .zip(ray.breakpoints())
        .enumerate()
        .map(|(k, (f, t))| {
            (
                k,
                Line {
                    intercept: f,
                    slope: ray.g_slope().clone() * t.clone(),
                },
            )
        })
        .collect();
    let domain_end = if ray.g_slope().is_negative() {
        let s_last = ray.slopes().last().unwrap().clone();
        Some(s_last / -ray.g_slope().clone())
    } else {
        None
    };
    envelope_of_lines(indexed, domain_end)
}

/// Exact argmin set at one parameter value, by direct scan over the table.
///
/// Independent of the envelope structure on purpose: lines touching the
/// envelope only at a vertex (and duplicate candidates) are found here even
/// though hull pruning drops them from segment active sets.
pub fn argmin_at<S: Scalar>(table: &ObjectiveTable<S>, alpha: &S) -> Result<Vec<usize>> {
    if table.m() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: table.m(),
        });
    }
    Ok(table.min_at(std::slice::from_ref(alpha))?.argmin)
}
