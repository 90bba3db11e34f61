//! Trade-off invariance analysis for a single regularizer.
//!
//! Off an exceptional set of parameter values, every minimizer (and every
//! minimizing sequence) of `H_alpha` sees the same regularizer value. This
//! module computes that exceptional set exactly, the monotone step function
//! `alpha -> G_alpha`, the one-sided limits `G_alpha^+ / G_alpha^-`, and the
//! derivative identities tying them to the value function's one-sided slopes.
//! Epsilon-minimizing sequences are generated and verified against the
//! predicted brackets.
//!
//! The limits `G_alpha^+ / G_alpha^-` are read off the envelope's one-sided
//! slopes (left and right derivative respectively); for finite tables that
//! identification is exact, while sequences are used only to *verify* the
//! bracketing, never to estimate it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::envelope::ConcavePLFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::table::ObjectiveTable;

/// Everything known about one parameter value.
///
/// `g_min`/`g_max` are the extremes of the regularizer over the argmin set
/// (the monotone function from the countability argument is `alpha -> g_min`);
/// `g_plus`/`g_minus` are the limiting regularizer values over minimizing
/// sequences, identified with the envelope's left/right slopes. The chain
/// `g_minus <= g_min <= g_max <= g_plus` always holds.
#[derive(Debug, Clone)]
pub struct InvarianceReport<S> {
    pub alpha: S,
    /// `H(alpha)`, the minimum value.
    pub value: S,
    pub argmin: Vec<usize>,
    pub g_min: S,
    pub g_max: S,
    pub g_plus: S,
    pub g_minus: S,
    /// True when distinct minimizers attain different regularizer values.
    pub exceptional: bool,
}

/// Computes the [`InvarianceReport`] at `alpha`.
///
/// The argmin comes from a direct table scan; the sequence limits come from
/// the envelope slopes. At `alpha = 0` there is no left neighborhood, so
/// `g_plus` falls back to the argmin's maximal regularizer value (which is
/// what constant sequences at minimizers realize there).
pub fn analyze_alpha<S: Scalar>(
    table: &ObjectiveTable<S>,
    env: &ConcavePLFunction<S>,
    alpha: &S,
) -> Result<InvarianceReport<S>> {
    let eval = env.evaluate(alpha)?;
    let g_minus = eval.right_slope.ok_or_else(|| Error::NotInterior {
        detail: format!(
            "alpha = {alpha} is the end of the finite-value domain; the lower sequence limit is -infinity there"
        ),
    })?;
    let argmin = crate::envelope::argmin_at(table, alpha)?;
    let mut g_min = table.candidates()[argmin[0]].g[0].clone();
    let mut g_max = g_min.clone();
    for &i in &argmin[1..] {
        let g = table.candidates()[i].g[0].clone();
        g_min = g_min.min_val(g.clone());
        g_max = g_max.max_val(g);
    }
    let g_plus = if alpha.is_zero_val() {
        g_max.clone()
    } else {
        eval.left_slope
    };
    let exceptional = g_max.is_gt(&g_min);
    Ok(InvarianceReport {
        alpha: alpha.clone(),
        value: eval.value,
        argmin,
        g_min,
        g_max,
        g_plus,
        g_minus,
        exceptional,
    })
}

/// All parameter values where the argmin's regularizer values spread apart,
/// in increasing order.
///
/// Candidates are the envelope breakpoints plus the domain boundary 0 (a tie
/// in `f` between candidates of different `g` makes 0 exceptional without
/// being a breakpoint). The result therefore has at most `n` entries, and at
/// most `n - 1` of them are interior.
pub fn exceptional_set<S: Scalar>(
    table: &ObjectiveTable<S>,
    env: &ConcavePLFunction<S>,
) -> Result<Vec<InvarianceReport<S>>> {
    let mut out = Vec::new();
    let zero = S::zero();
    let report = analyze_alpha(table, env, &zero)?;
    if report.exceptional {
        out.push(report);
    }
    for b in env.breakpoints() {
        let report = analyze_alpha(table, env, b)?;
        if report.exceptional {
            out.push(report);
        }
    }
    Ok(out)
}

/// The step function `alpha -> G_alpha`: constant on every open segment of
/// the envelope (equal to the segment slope), with the pair
/// `(G^+, G^-) = (left, right)` slopes at each breakpoint. Non-increasing
/// throughout; `G^+` is left-continuous and `G^-` right-continuous.
#[derive(Debug, Clone)]
pub struct GStepFunction<S> {
    pub breakpoints: Vec<S>,
    /// Per-segment constant value; `values.len() == breakpoints.len() + 1`.
    pub values: Vec<S>,
    /// `(G^+, G^-)` at each breakpoint.
    pub pairs: Vec<(S, S)>,
    pub domain_end: Option<S>,
}

impl<S: Scalar> GStepFunction<S> {
    /// The constant value on the segment containing `alpha`, or the
    /// breakpoint pair if `alpha` is a breakpoint.
    pub fn at(&self, alpha: &S) -> (S, S) {
        for (k, b) in self.breakpoints.iter().enumerate() {
            if b.is_eq(alpha) {
                return self.pairs[k].clone();
            }
            if alpha.is_lt(b) {
                return (self.values[k].clone(), self.values[k].clone());
            }
        }
        let last = self.values.last().unwrap().clone();
        (last.clone(), last)
    }
}

pub fn g_step<S: Scalar>(env: &ConcavePLFunction<S>) -> GStepFunction<S> {
    let values = env.segment_slopes();
    let pairs = (0..env.breakpoints().len())
        .map(|k| (values[k].clone(), values[k + 1].clone()))
        .collect();
    GStepFunction {
        breakpoints: env.breakpoints().to_vec(),
        values,
        pairs,
        domain_end: env.domain_end().cloned(),
    }
}

/// The six values compared by the monotonicity chains at `alpha1 < alpha2`:
/// `inf_{argmin(a1)} G >= sup_{argmin(a2)} G` and
/// `G_{a1}^+ >= G_{a1}^- >= G_{a2}^+ >= G_{a2}^-`.
#[derive(Debug, Clone)]
pub struct MonotonicityVerdict<S> {
    pub alpha1: S,
    pub alpha2: S,
    pub argmin_inf_1: S,
    pub argmin_sup_2: S,
    pub g_plus_1: S,
    pub g_minus_1: S,
    pub g_plus_2: S,
    pub g_minus_2: S,
}

/// Checks both monotonicity chains exactly. A failed chain on well-formed
/// input is an implementation bug and surfaces as `TheoremViolation`.
pub fn check_monotonicity<S: Scalar>(
    table: &ObjectiveTable<S>,
    env: &ConcavePLFunction<S>,
    alpha1: &S,
    alpha2: &S,
) -> Result<MonotonicityVerdict<S>> {
    if !alpha1.is_lt(alpha2) {
        return Err(Error::UnorderedPair {
            alpha1: alpha1.to_string(),
            alpha2: alpha2.to_string(),
        });
    }
    let r1 = analyze_alpha(table, env, alpha1)?;
    let r2 = analyze_alpha(table, env, alpha2)?;
    if !r1.g_min.is_ge(&r2.g_max) {
        return Err(Error::TheoremViolation(format!(
            "argmin chain failed at ({alpha1}, {alpha2}): inf {} < sup {}",
            r1.g_min, r2.g_max
        )));
    }
    let chain = [
        r1.g_plus.clone(),
        r1.g_minus.clone(),
        r2.g_plus.clone(),
        r2.g_minus.clone(),
    ];
    for w in chain.windows(2) {
        if !w[0].is_ge(&w[1]) {
            return Err(Error::TheoremViolation(format!(
                "sequence-limit chain failed at ({alpha1}, {alpha2}): {} < {}",
                w[0], w[1]
            )));
        }
    }
    Ok(MonotonicityVerdict {
        alpha1: alpha1.clone(),
        alpha2: alpha2.clone(),
        argmin_inf_1: r1.g_min,
        argmin_sup_2: r2.g_max,
        g_plus_1: r1.g_plus,
        g_minus_1: r1.g_minus,
        g_plus_2: r2.g_plus,
        g_minus_2: r2.g_minus,
    })
}

/// One finite-difference probe of the value function.
#[derive(Debug, Clone)]
pub struct QuotientSample<S> {
    pub h: S,
    /// `(H(alpha) - H(alpha - h)) / h`, when `alpha - h >= 0`.
    pub left: Option<S>,
    /// `(H(alpha + h) - H(alpha)) / h`, when `alpha + h` is in the domain.
    pub right: Option<S>,
    /// True when `h` is small enough that neither quotient spans a breakpoint.
    pub clean: bool,
}

/// Derivative identities at one interior parameter value.
#[derive(Debug, Clone)]
pub struct DerivativeReport<S> {
    pub alpha: S,
    pub g_plus: S,
    pub g_minus: S,
    /// `d/dalpha H(alpha)` exists iff the one-sided limits agree.
    pub derivative_exists: bool,
    /// Whether `alpha` is a kink (breakpoint) of the value function.
    pub exceptional: bool,
    pub samples: Vec<QuotientSample<S>>,
}

/// Verifies that difference quotients reproduce the one-sided slopes.
///
/// For every `h` in the schedule small enough that the quotient does not span
/// a breakpoint, the right quotient must equal `G_alpha^-` and the left
/// quotient `G_alpha^+` exactly (up to the backend's comparison). Larger `h`
/// are reported with `clean = false` and not asserted. Also checks the
/// equivalence "derivative exists iff the one-sided limits agree iff alpha is
/// not a kink".
pub fn derivative_identities<S: Scalar>(
    env: &ConcavePLFunction<S>,
    alpha: &S,
    h_schedule: &[S],
) -> Result<DerivativeReport<S>> {
    if !alpha.is_positive() {
        return Err(Error::NotInterior {
            detail: format!("alpha = {alpha} is not interior to the domain"),
        });
    }
    if let Some(end) = env.domain_end() {
        if alpha.is_ge(end) {
            return Err(Error::NotInterior {
                detail: format!("alpha = {alpha} is not strictly inside the finite-value domain"),
            });
        }
    }
    let eval = env.evaluate(alpha)?;
    let g_plus = eval.left_slope.clone();
    let g_minus = eval
        .right_slope
        .clone()
        .expect("interior point has a right slope");
    // distance to the nearest breakpoint strictly left / right of alpha
    let mut left_gap = alpha.clone(); // down to the domain boundary 0
    let mut right_gap: Option<S> = env.domain_end().map(|end| end.clone() - alpha.clone());
    for b in env.breakpoints() {
        if b.is_lt(alpha) {
            left_gap = left_gap.min_val(alpha.clone() - b.clone());
        } else if b.is_gt(alpha) {
            let gap = b.clone() - alpha.clone();
            right_gap = Some(match right_gap {
                None => gap,
                Some(r) => r.min_val(gap),
            });
        }
    }
    let mut samples = Vec::with_capacity(h_schedule.len());
    for h in h_schedule {
        if !h.is_positive() {
            return Err(Error::InvalidSchedule(format!("step {h} is not positive")));
        }
        let left_ok = h.is_le(&left_gap);
        let right_ok = match &right_gap {
            None => true,
            Some(r) => h.is_le(r),
        };
        let left = if alpha.is_ge(h) {
            let lo = env.value_at(&(alpha.clone() - h.clone()))?;
            Some((eval.value.clone() - lo) / h.clone())
        } else {
            None
        };
        let right = {
            let hi = alpha.clone() + h.clone();
            match env.value_at(&hi) {
                Ok(v) => Some((v - eval.value.clone()) / h.clone()),
                Err(Error::UnboundedBelow { .. }) => None,
                Err(e) => return Err(e),
            }
        };
        let clean = left_ok && right_ok && left.is_some() && right.is_some();
        if clean {
            let l = left.as_ref().unwrap();
            let r = right.as_ref().unwrap();
            if !l.is_eq(&g_plus) {
                return Err(Error::TheoremViolation(format!(
                    "left quotient {l} at h = {h} differs from the left slope {g_plus}"
                )));
            }
            if !r.is_eq(&g_minus) {
                return Err(Error::TheoremViolation(format!(
                    "right quotient {r} at h = {h} differs from the right slope {g_minus}"
                )));
            }
        }
        samples.push(QuotientSample {
            h: h.clone(),
            left,
            right,
            clean,
        });
    }
    let derivative_exists = g_plus.is_eq(&g_minus);
    let exceptional = env.is_breakpoint(alpha);
    if derivative_exists == exceptional {
        return Err(Error::TheoremViolation(format!(
            "differentiability/exceptionality equivalence failed at alpha = {alpha}"
        )));
    }
    Ok(DerivativeReport {
        alpha: alpha.clone(),
        g_plus,
        g_minus,
        derivative_exists,
        exceptional,
        samples,
    })
}

/// How an epsilon-minimizer is chosen from each sublevel set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// The epsilon-minimizer with the largest regularizer value.
    AdversarialMax,
    /// The epsilon-minimizer with the smallest regularizer value.
    AdversarialMin,
    /// A uniform choice, driven by the recorded seed.
    Random,
    /// AdversarialMax on even steps, AdversarialMin on odd ones.
    Alternating,
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::AdversarialMax => "adversarial-max",
            Policy::AdversarialMin => "adversarial-min",
            Policy::Random => "random",
            Policy::Alternating => "alternating",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EpsEntry<S> {
    pub candidate: usize,
    pub eps: S,
    pub h_value: S,
    pub g_value: S,
}

/// A quasi-minimizing sequence trace: entry `i` is an `eps_i`-minimizer of
/// `H_alpha`, with `eps_i` strictly decreasing.
#[derive(Debug, Clone)]
pub struct EpsSequence<S> {
    pub alpha: S,
    pub policy: Policy,
    /// Recorded for the random policy so traces are reproducible.
    pub seed: Option<u64>,
    pub entries: Vec<EpsEntry<S>>,
}

fn validate_schedule<S: Scalar>(schedule: &[S]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::InvalidSchedule("schedule is empty".into()));
    }
    for e in schedule {
        if !e.is_positive() {
            return Err(Error::InvalidSchedule(format!("{e} is not positive")));
        }
    }
    for w in schedule.windows(2) {
        if !w[1].is_lt(&w[0]) {
            return Err(Error::InvalidSchedule(
                "schedule must be strictly decreasing".into(),
            ));
        }
    }
    Ok(())
}

/// Generates a genuine minimizing sequence: entry `i` is drawn from the
/// sublevel set `{u : H_alpha(u) <= H(alpha) + eps_i}` according to `policy`.
pub fn generate_eps_sequence<S: Scalar>(
    table: &ObjectiveTable<S>,
    env: &ConcavePLFunction<S>,
    alpha: &S,
    schedule: &[S],
    policy: Policy,
    seed: u64,
) -> Result<EpsSequence<S>> {
    validate_schedule(schedule)?;
    let h_min = env.value_at(alpha)?;
    let alpha_slice = std::slice::from_ref(alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(schedule.len());
    for (step, eps) in schedule.iter().enumerate() {
        let cutoff = h_min.clone() + eps.clone();
        let mut pool: Vec<(usize, S, S)> = Vec::new(); // (index, h, g)
        for (i, c) in table.candidates().iter().enumerate() {
            if let Some(h) = table.eval_h(i, alpha_slice)?.finite() {
                if h.is_le(&cutoff) {
                    pool.push((i, h.clone(), c.g[0].clone()));
                }
            }
        }
        debug_assert!(!pool.is_empty(), "the argmin is always in the sublevel set");
        let pick = match policy {
            Policy::AdversarialMax => select_extreme(&pool, true),
            Policy::AdversarialMin => select_extreme(&pool, false),
            Policy::Alternating => select_extreme(&pool, step % 2 == 0),
            Policy::Random => pool[rng.gen_range(0..pool.len())].clone(),
        };
        entries.push(EpsEntry {
            candidate: pick.0,
            eps: eps.clone(),
            h_value: pick.1,
            g_value: pick.2,
        });
    }
    Ok(EpsSequence {
        alpha: alpha.clone(),
        policy,
        seed: (policy == Policy::Random).then_some(seed),
        entries,
    })
}

fn select_extreme<S: Scalar>(pool: &[(usize, S, S)], largest: bool) -> (usize, S, S) {
    let mut best = pool[0].clone();
    for item in &pool[1..] {
        let better = if largest {
            item.2.key_cmp(&best.2) == std::cmp::Ordering::Greater
        } else {
            item.2.key_cmp(&best.2) == std::cmp::Ordering::Less
        };
        if better {
            best = item.clone();
        }
    }
    best
}

/// Outcome of checking a sequence trace against a report.
#[derive(Debug, Clone)]
pub struct SequenceVerdict<S> {
    /// `[G^-, G^+]` from the report.
    pub bracket: (S, S),
    /// First entry index from which the sublevel set equals the argmin
    /// (`None` if the schedule never gets that small).
    pub tail_start: Option<usize>,
    /// All tail regularizer values lie in the bracket.
    pub bracket_ok: bool,
    /// For non-exceptional alpha only: the tail trace is constant at
    /// `G_alpha`. Not asserted at exceptional values.
    pub eventually_constant: Option<bool>,
    pub tail_min: Option<S>,
    pub tail_max: Option<S>,
    pub pass: bool,
}

/// Validates a sequence entry-by-entry and checks the predicted bracketing.
///
/// Every entry must genuinely be an `eps_i`-minimizer (recomputed from the
/// table, not trusted from the trace) with a strictly decreasing schedule.
/// From the first index where the sublevel set collapses to the argmin, the
/// regularizer trace must stay inside `[G^-, G^+]`; at non-exceptional
/// parameters it must be constant there (finite tables converge in finitely
/// many steps).
pub fn verify_sequence_bracket<S: Scalar>(
    table: &ObjectiveTable<S>,
    env: &ConcavePLFunction<S>,
    seq: &EpsSequence<S>,
    report: &InvarianceReport<S>,
) -> Result<SequenceVerdict<S>> {
    if !seq.alpha.is_eq(&report.alpha) {
        return Err(Error::AlphaMismatch);
    }
    let schedule: Vec<S> = seq.entries.iter().map(|e| e.eps.clone()).collect();
    validate_schedule(&schedule)?;
    let alpha_slice = std::slice::from_ref(&seq.alpha);
    let h_min = env.value_at(&seq.alpha)?;
    let mut tail_start = None;
    for (i, entry) in seq.entries.iter().enumerate() {
        let h = table
            .eval_h(entry.candidate, alpha_slice)?
            .finite()
            .cloned()
            .ok_or_else(|| Error::InvalidSequenceEntry {
                index: i,
                detail: "candidate has infinite objective value".into(),
            })?;
        let cutoff = h_min.clone() + entry.eps.clone();
        if !h.is_le(&cutoff) {
            return Err(Error::InvalidSequenceEntry {
                index: i,
                detail: format!("H = {h} exceeds H(alpha) + eps = {cutoff}"),
            });
        }
        if tail_start.is_none() {
            let sublevel: Vec<usize> = (0..table.len())
                .filter(|&j| {
                    table
                        .eval_h(j, alpha_slice)
                        .ok()
                        .and_then(|v| v.finite().cloned())
                        .is_some_and(|v| v.is_le(&cutoff))
                })
                .collect();
            if sublevel == report.argmin {
                tail_start = Some(i);
            }
        }
    }
    let tail: Vec<S> = match tail_start {
        Some(start) => seq.entries[start..]
            .iter()
            .map(|e| table.candidates()[e.candidate].g[0].clone())
            .collect(),
        None => Vec::new(),
    };
    let bracket = (report.g_minus.clone(), report.g_plus.clone());
    let bracket_ok = tail
        .iter()
        .all(|g| g.is_ge(&bracket.0) && g.is_le(&bracket.1));
    let eventually_constant = if report.exceptional {
        None
    } else {
        // G_alpha = g_plus = g_minus at non-exceptional alpha
        Some(tail.iter().all(|g| g.is_eq(&report.g_plus)))
    };
    let tail_min = tail.iter().cloned().reduce(|a, b| a.min_val(b));
    let tail_max = tail.iter().cloned().reduce(|a, b| a.max_val(b));
    let pass = tail_start.is_some() && bracket_ok && eventually_constant.unwrap_or(true);
    Ok(SequenceVerdict {
        bracket,
        tail_start,
        bracket_ok,
        eventually_constant,
        tail_min,
        tail_max,
        pass,
    })
}
