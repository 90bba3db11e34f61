//! Trade-off invariance at critical points of polynomial objectives.
//!
//! For univariate polynomial `F`, `G` (real-analytic, so the required local
//! gradient inequality holds automatically), the principle extends from
//! minimizers to critical points: off a countable set of weights, any two
//! critical points of `H_alpha = F + alpha G` inside a compact window that
//! share the same `H_alpha` value also share the same `G` value.
//!
//! Exactness discipline: root coordinates are isolating intervals, so
//! equal-`H` grouping is necessarily tolerance-based ("candidate" groups),
//! while *violations* are certified one-sidedly — a group is flagged only
//! when two members' `G` enclosures are disjoint, which proves the true
//! values differ.

use crate::error::{Error, Result};
use crate::poly::{isolate_roots, Interval, Polynomial};
use crate::scalar::{ExactScalar, Scalar};

/// Default isolating-interval width, `2^-40`.
pub fn default_root_width() -> ExactScalar {
    ExactScalar::pow2_neg(40)
}

/// Default tolerance for grouping critical points by `H` value, `2^-30`.
pub fn default_equal_h_tol() -> ExactScalar {
    ExactScalar::pow2_neg(30)
}

/// Polynomial fidelity/regularizer pair on a compact window.
#[derive(Debug, Clone)]
pub struct PolynomialPair {
    f: Polynomial,
    g: Polynomial,
    window: (ExactScalar, ExactScalar),
}

impl PolynomialPair {
    /// `F` must have degree at least 2 (otherwise it has no interior critical
    /// structure); `G` may be any polynomial, including zero.
    pub fn new(f: Polynomial, g: Polynomial, window: (ExactScalar, ExactScalar)) -> Result<Self> {
        match f.degree() {
            Some(d) if d >= 2 => {}
            _ => {
                return Err(Error::InvalidPolynomial(
                    "F must have degree at least 2".into(),
                ))
            }
        }
        if !window.0.is_lt(&window.1) {
            return Err(Error::InvalidPolynomial(format!(
                "window [{}, {}] is empty",
                window.0, window.1
            )));
        }
        Ok(PolynomialPair { f, g, window })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn g(&self) -> &Polynomial {
        &self.g
    }

    pub fn window(&self) -> (&ExactScalar, &ExactScalar) {
        (&self.window.0, &self.window.1)
    }

    /// `H_alpha = F + alpha G`.
    pub fn h_alpha(&self, alpha: &ExactScalar) -> Polynomial {
        self.f.add(&self.g.scale(alpha))
    }

    /// `H_alpha' = F' + alpha G'`.
    pub fn h_alpha_derivative(&self, alpha: &ExactScalar) -> Polynomial {
        self.f.derivative().add(&self.g.derivative().scale(alpha))
    }
}

/// All critical points of `H_alpha` in the window, isolated to width at most
/// `width` (multiplicity-aware: isolation runs on the squarefree part).
pub fn critical_points(
    pair: &PolynomialPair,
    alpha: &ExactScalar,
    width: &ExactScalar,
) -> Result<Vec<Interval>> {
    let d = pair.h_alpha_derivative(alpha);
    if d.is_zero() {
        return Err(Error::DegenerateDerivative {
            alpha: alpha.to_string(),
        });
    }
    let (lo, hi) = pair.window();
    isolate_roots(&d, lo, hi, width)
}

/// One critical point with rigorous value enclosures.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub interval: Interval,
    pub h: Interval,
    pub g: Interval,
}

/// A certified disagreement inside a candidate equal-`H` group.
#[derive(Debug, Clone)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    /// Certified lower bound on `|G(u_i) - G(u_j)|`.
    pub gap: ExactScalar,
}

/// Critical points whose `H` values coincide within the grouping tolerance.
/// Only a certified `G` disagreement marks the group as a violation; merely
/// near-equal `H` values are reported as candidates, never asserted equal.
#[derive(Debug, Clone)]
pub struct CriticalGroup {
    pub members: Vec<usize>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone)]
pub struct CriticalReport {
    pub alpha: ExactScalar,
    pub points: Vec<CriticalPoint>,
    pub groups: Vec<CriticalGroup>,
    /// True when some group certifies a `G` disagreement, i.e. this weight is
    /// empirically exceptional.
    pub flagged: bool,
}

/// Analyzes one weight: enumerate critical points, group by (tolerance-)equal
/// `H_alpha` value, certify `G` disagreements inside groups.
pub fn analyze_critical(
    pair: &PolynomialPair,
    alpha: &ExactScalar,
    width: &ExactScalar,
    equal_h_tol: &ExactScalar,
) -> Result<CriticalReport> {
    let roots = critical_points(pair, alpha, width)?;
    let h = pair.h_alpha(alpha);
    let points: Vec<CriticalPoint> = roots
        .into_iter()
        .map(|interval| {
            let h_enc = h.eval_interval(&interval);
            let g_enc = pair.g.eval_interval(&interval);
            CriticalPoint {
                interval,
                h: h_enc,
                g: g_enc,
            }
        })
        .collect();
    // group by H midpoint: sort, then chain points within the tolerance
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].h.midpoint().key_cmp(&points[b].h.midpoint()));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        let mid = points[idx].h.midpoint();
        match groups.last_mut() {
            Some(group) => {
                let prev_mid = points[*group.last().unwrap()].h.midpoint();
                if (mid.clone() - prev_mid).abs_val().is_le(equal_h_tol) {
                    group.push(idx);
                } else {
                    groups.push(vec![idx]);
                }
            }
            None => groups.push(vec![idx]),
        }
    }
    let groups: Vec<CriticalGroup> = groups
        .into_iter()
        .map(|members| {
            let mut violations = Vec::new();
            for a in 0..members.len() {
                for b in (a + 1)..members.len() {
                    let (i, j) = (members[a], members[b]);
                    let gap = points[i].g.gap(&points[j].g);
                    if gap.is_positive() {
                        violations.push(Violation { i, j, gap });
                    }
                }
            }
            CriticalGroup {
                members,
                violations,
            }
        })
        .collect();
    let flagged = groups.iter().any(|g| !g.violations.is_empty());
    Ok(CriticalReport {
        alpha: alpha.clone(),
        points,
        groups,
        flagged,
    })
}

/// Scans a list of weights; the flagged subset is the empirical exceptional
/// set, expected finite. A degenerate derivative at some weight (identically
/// zero, every point critical) aborts the scan.
pub fn invariance_scan(
    pair: &PolynomialPair,
    alphas: &[ExactScalar],
    equal_h_tol: &ExactScalar,
) -> Result<Vec<CriticalReport>> {
    let width = default_root_width();
    alphas
        .iter()
        .map(|alpha| {
            if alpha.is_negative() {
                return Err(Error::NegativeAlpha {
                    alpha: alpha.to_string(),
                });
            }
            analyze_critical(pair, alpha, &width, equal_h_tol)
        })
        .collect()
}
