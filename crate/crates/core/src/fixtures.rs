//! Built-in problem instances.
//!
//! These are the concrete examples every demo and test suite runs on: the
//! accumulating-breakpoint family on a grid and on the ray, its trivially
//! augmented two-parameter variant, and the penalty-method grid problem.

use num_bigint::BigInt;

use crate::ray::PLRayDomain;
use crate::scalar::{ExactScalar, Scalar};
use crate::table::{Candidate, ObjectiveTable};

/// `alpha^k = sum_{i=1..k} 2^-i = 1 - 2^-k`.
pub fn alpha_k(k: usize) -> ExactScalar {
    ExactScalar::one() - ExactScalar::pow2_neg(k)
}

/// The accumulating-breakpoint family restricted to the integer grid
/// `{0, 1, .., n}` with a single regularizer:
/// `f(k) = sum_{i=1..k} 2^-i * (k - i + 1)` and `g(k) = -k`.
///
/// Its envelope has breakpoints exactly at `alpha^k` for `k = 1..n`, with the
/// two candidates `k-1, k` tying there.
pub fn halfsum(n: usize) -> ObjectiveTable<ExactScalar> {
    let mut candidates = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut f = ExactScalar::zero();
        for i in 1..=k {
            let weight = ExactScalar::pow2_neg(i);
            let run = ExactScalar::from_int((k - i + 1) as i64);
            f = f + weight * run;
        }
        let g = ExactScalar::from_int(-(k as i64));
        let mut c = Candidate::new(k.to_string(), f, vec![g]);
        c.point = Some(vec![k as f64]);
        candidates.push(c);
    }
    ObjectiveTable::new(1, candidates).expect("fixture table is well-formed")
}

/// [`halfsum`] with a second, identically-zero regularizer appended. Along
/// the first axis every slice behaves exactly like the one-parameter family;
/// along the second axis nothing ever happens.
pub fn halfsum_with_trivial_g2(n: usize) -> ObjectiveTable<ExactScalar> {
    let base = halfsum(n);
    let candidates = base
        .candidates()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.g.push(ExactScalar::zero());
            c
        })
        .collect();
    ObjectiveTable::new(2, candidates).expect("fixture table is well-formed")
}

/// Truncation of the accumulating-breakpoint family on the ray `[0, +inf)`:
/// `F` keeps its first `terms` summands (so vertices sit at `0..terms-1` and
/// segment slopes are `alpha^1 .. alpha^terms`) and `G(u) = -u`. The value
/// function of this instance is `-inf` for `alpha > alpha^terms`.
pub fn halfsum_ray(terms: usize) -> PLRayDomain<ExactScalar> {
    assert!(terms >= 1, "need at least one summand");
    let breakpoints = (0..terms as i64).map(ExactScalar::from_int).collect();
    let slopes = (1..=terms).map(alpha_k).collect();
    PLRayDomain::new(
        breakpoints,
        slopes,
        ExactScalar::from_int(-1),
        ExactScalar::zero(),
    )
    .expect("fixture ray is well-formed")
}

/// Penalty-method demo: points `u` on a `side x side` grid over `[-2, 2]^2`,
/// fidelity `F(u) = |u - (1,1)|^2` and squared constraint violation
/// `G(u) = (u_1 + u_2 - 1)^2` for the constraint `u_1 + u_2 = 1`.
pub fn penalty_grid(side: usize) -> ObjectiveTable<ExactScalar> {
    assert!(side >= 2, "grid needs at least two points per axis");
    let den = (side - 1) as i64;
    let coord = |k: usize| -> ExactScalar {
        // -2 + 4k/(side-1)
        ExactScalar::new(BigInt::from(4 * k as i64 - 2 * den), BigInt::from(den))
            .expect("nonzero denominator")
    };
    let one = ExactScalar::one();
    let mut candidates = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let x = coord(i);
            let y = coord(j);
            let dx = x.clone() - one.clone();
            let dy = y.clone() - one.clone();
            let f = dx.clone() * dx + dy.clone() * dy;
            let viol = x.clone() + y.clone() - one.clone();
            let g = viol.clone() * viol;
            let mut c = Candidate::new(format!("{i}_{j}"), f, vec![g]);
            c.point = Some(vec![x.to_f64(), y.to_f64()]);
            candidates.push(c);
        }
    }
    ObjectiveTable::new(1, candidates).expect("fixture table is well-formed")
}
