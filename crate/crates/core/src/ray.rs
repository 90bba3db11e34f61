//! Piecewise-linear objectives on the ray `[0, +inf)`.
//!
//! This is the one non-tabular domain: a convex piecewise-linear fidelity
//! term `F` on `[0, +inf)` with a linear regularizer `G(u) = c * u`. It
//! exists to model truncations of the accumulating-breakpoint family, where
//! the value function becomes `-inf` past a finite threshold.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Convex piecewise-linear `F` on `[0, +inf)` plus a linear `G(u) = c * u`.
///
/// `breakpoints` are `0 = t_0 < t_1 < ... < t_K`; `slopes[k]` is the slope of
/// `F` on the k-th segment, the last one extending to `+inf`. Slopes are
/// strictly increasing (convexity) and the final slope is nonnegative, so
/// `inf F > -inf` and the finite-value parameter set is `[0, end]`.
#[derive(Debug, Clone)]
pub struct PLRayDomain<S> {
    breakpoints: Vec<S>,
    slopes: Vec<S>,
    g_slope: S,
    f0: S,
}

impl<S: Scalar> PLRayDomain<S> {
    pub fn new(breakpoints: Vec<S>, slopes: Vec<S>, g_slope: S, f0: S) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidRay(
                "at least one breakpoint (t_0 = 0)".into(),
            ));
        }
        if !breakpoints[0].is_zero_val() {
            return Err(Error::InvalidRay("first breakpoint must be 0".into()));
        }
        if slopes.len() != breakpoints.len() {
            return Err(Error::InvalidRay(format!(
                "{} breakpoints require {} segment slopes (got {})",
                breakpoints.len(),
                breakpoints.len(),
                slopes.len()
            )));
        }
        for w in breakpoints.windows(2) {
            if !w[0].is_lt(&w[1]) {
                return Err(Error::InvalidRay(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        for w in slopes.windows(2) {
            if !w[0].is_lt(&w[1]) {
                return Err(Error::InvalidRay(
                    "segment slopes must be strictly increasing (F convex)".into(),
                ));
            }
        }
        if slopes.last().unwrap().is_negative() {
            return Err(Error::InvalidRay(
                "final slope must be nonnegative, else F is unbounded below".into(),
            ));
        }
        Ok(PLRayDomain {
            breakpoints,
            slopes,
            g_slope,
            f0,
        })
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[S] {
        &self.slopes
    }

    pub fn g_slope(&self) -> &S {
        &self.g_slope
    }

    pub fn f0(&self) -> &S {
        &self.f0
    }

    pub fn vertex_count(&self) -> usize {
        self.breakpoints.len()
    }

    /// `F(t_k)` for every vertex, by accumulating segment slopes.
    pub fn vertex_values(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(self.breakpoints.len());
        let mut value = self.f0.clone();
        out.push(value.clone());
        for k in 1..self.breakpoints.len() {
            let run = self.breakpoints[k].clone() - self.breakpoints[k - 1].clone();
            value = value + self.slopes[k - 1].clone() * run;
            out.push(value.clone());
        }
        out
    }

    /// `F(u)` for any `u >= 0`.
    pub fn eval_f(&self, u: &S) -> Result<S> {
        if u.is_negative() {
            return Err(Error::InvalidRay(format!("u = {u} is negative")));
        }
        let values = self.vertex_values();
        // last vertex at or before u
        let mut k = 0;
        for (i, t) in self.breakpoints.iter().enumerate() {
            if t.is_le(u) {
                k = i;
            }
        }
        let slope = if k + 1 < self.breakpoints.len() {
            self.slopes[k].clone()
        } else {
            self.slopes.last().unwrap().clone()
        };
        Ok(values[k].clone() + slope * (u.clone() - self.breakpoints[k].clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn ex(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    fn demo_ray() -> PLRayDomain<ExactScalar> {
        PLRayDomain::new(
            vec![ex(0, 1), ex(1, 1), ex(2, 1)],
            vec![ex(1, 2), ex(3, 4), ex(7, 8)],
            ex(-1, 1),
            ex(0, 1),
        )
        .unwrap()
    }

    #[test]
    fn vertex_values_accumulate_slopes() {
        let ray = demo_ray();
        let v = ray.vertex_values();
        assert!(v[0].is_eq(&ex(0, 1)));
        assert!(v[1].is_eq(&ex(1, 2)));
        assert!(v[2].is_eq(&ex(5, 4)));
    }

    #[test]
    fn eval_f_between_vertices() {
        let ray = demo_ray();
        // F(3/2) = 1/2 + 3/4 * 1/2 = 7/8
        assert!(ray.eval_f(&ex(3, 2)).unwrap().is_eq(&ex(7, 8)));
        // beyond the last vertex: F(4) = 5/4 + 7/8 * 2 = 3
        assert!(ray.eval_f(&ex(4, 1)).unwrap().is_eq(&ex(3, 1)));
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(PLRayDomain::new(vec![ex(1, 1)], vec![ex(1, 1)], ex(0, 1), ex(0, 1)).is_err());
        assert!(PLRayDomain::new(
            vec![ex(0, 1), ex(1, 1)],
            vec![ex(1, 1), ex(1, 2)],
            ex(0, 1),
            ex(0, 1)
        )
        .is_err());
        assert!(PLRayDomain::new(
            vec![ex(0, 1), ex(1, 1)],
            vec![ex(-2, 1), ex(-1, 1)],
            ex(0, 1),
            ex(0, 1)
        )
        .is_err());
    }
}
