//! Finite candidate tables.
//!
//! A table holds candidates `u` with fidelity value `f(u)` and regularizer
//! values `g_1(u) .. g_m(u)`. The parametric objective is the affine form
//! `H_alpha(u) = f(u) + sum_j alpha_j * g_j(u)` with intercept `f` and slope
//! vector `g`. Candidates are opaque labels as far as the analysis is
//! concerned; the optional coordinates are carried only for reporting.
//!
//! Duplicate candidates are deliberately preserved: argmin sets must reflect
//! the caller's input, multiplicity included.

use crate::error::{Error, Result};
use crate::scalar::{Backend, Ext, Scalar};

/// One table row: an opaque candidate with its objective data.
#[derive(Debug, Clone)]
pub struct Candidate<S> {
    pub id: String,
    /// Optional point coordinates, for display in domain-level demos.
    pub point: Option<Vec<f64>>,
    /// Fidelity value; may be `+inf` (such a candidate never minimizes).
    pub f: Ext<S>,
    /// Regularizer values, one per parameter axis.
    pub g: Vec<S>,
}

impl<S: Scalar> Candidate<S> {
    pub fn new(id: impl Into<String>, f: S, g: Vec<S>) -> Self {
        Candidate {
            id: id.into(),
            point: None,
            f: Ext::Finite(f),
            g,
        }
    }
}

/// Finite candidate set with `m >= 1` regularizers, all values on one backend.
#[derive(Debug, Clone)]
pub struct ObjectiveTable<S> {
    m: usize,
    candidates: Vec<Candidate<S>>,
}

/// Result of a direct minimization scan at a fixed parameter vector.
#[derive(Debug, Clone)]
pub struct MinResult<S> {
    /// The minimum value `H(alpha) = min_u H_alpha(u)` (always finite:
    /// tables contain at least one finite candidate).
    pub value: S,
    /// Every index attaining the minimum, ascending.
    pub argmin: Vec<usize>,
}

impl<S: Scalar> ObjectiveTable<S> {
    pub fn new(m: usize, candidates: Vec<Candidate<S>>) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::EmptyTable);
        }
        if m == 0 {
            return Err(Error::Format("regularizer count m must be >= 1".into()));
        }
        for c in &candidates {
            if c.g.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: c.g.len(),
                });
            }
        }
        if !candidates.iter().any(|c| c.f.is_finite()) {
            return Err(Error::AllInfinite);
        }
        Ok(ObjectiveTable { m, candidates })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    pub fn candidates(&self) -> &[Candidate<S>] {
        &self.candidates
    }

    pub fn candidate(&self, index: usize) -> Result<&Candidate<S>> {
        self.candidates.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.candidates.len(),
        })
    }

    fn check_alpha(&self, alpha: &[S]) -> Result<()> {
        if alpha.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: alpha.len(),
            });
        }
        for a in alpha {
            if a.is_negative() {
                return Err(Error::NegativeAlpha {
                    alpha: a.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Evaluates `H_alpha` at one candidate: `f + sum_j alpha_j * g_j`.
    pub fn eval_h(&self, index: usize, alpha: &[S]) -> Result<Ext<S>> {
        self.check_alpha(alpha)?;
        let c = self.candidate(index)?;
        Ok(Self::eval_candidate(c, alpha))
    }

    fn eval_candidate(c: &Candidate<S>, alpha: &[S]) -> Ext<S> {
        match c.f.finite() {
            None => Ext::PosInf,
            Some(f) => {
                let mut acc = f.clone();
                for (a, g) in alpha.iter().zip(&c.g) {
                    acc = acc + a.clone() * g.clone();
                }
                Ext::Finite(acc)
            }
        }
    }

    /// Direct scan: minimum of `H_alpha` over the whole table together with
    /// the full argmin set (ties decided by the backend's comparison).
    pub fn min_at(&self, alpha: &[S]) -> Result<MinResult<S>> {
        self.check_alpha(alpha)?;
        let mut best: Option<S> = None;
        let mut values: Vec<Option<S>> = Vec::with_capacity(self.candidates.len());
        for c in &self.candidates {
            let v = Self::eval_candidate(c, alpha).finite().cloned();
            if let Some(v) = &v {
                best = Some(match best.take() {
                    None => v.clone(),
                    Some(b) => b.min_val(v.clone()),
                });
            }
            values.push(v);
        }
        let best = best.ok_or(Error::AllInfinite)?;
        let argmin: Vec<usize> = values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| match v {
                Some(v) if v.is_eq(&best) => Some(i),
                _ => None,
            })
            .collect();
        Ok(MinResult {
            value: best,
            argmin,
        })
    }

    /// `max_u |g_axis(u)|` over all candidates: the uniform bound on the
    /// limiting regularizer values along any slice.
    pub fn max_abs_g(&self, axis: usize) -> Result<S> {
        if axis >= self.m {
            return Err(Error::AxisOutOfRange { axis, m: self.m });
        }
        let mut best = S::zero();
        for c in &self.candidates {
            best = best.max_val(c.g[axis].abs_val());
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn ex(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    fn small_table() -> ObjectiveTable<ExactScalar> {
        ObjectiveTable::new(
            1,
            vec![
                Candidate::new("a", ex(0, 1), vec![ex(0, 1)]),
                Candidate::new("b", ex(1, 2), vec![ex(-1, 1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn eval_h_at_zero_is_f() {
        let t = small_table();
        let v = t.eval_h(1, &[ex(0, 1)]).unwrap();
        assert!(v.finite().unwrap().is_eq(&ex(1, 2)));
    }

    #[test]
    fn eval_h_matches_affine_form() {
        // candidate b: 1/2 - alpha, at alpha = 3/4 -> -1/4
        let t = small_table();
        let v = t.eval_h(1, &[ex(3, 4)]).unwrap();
        assert!(v.finite().unwrap().is_eq(&ex(-1, 4)));
    }

    #[test]
    fn eval_h_rejects_bad_inputs() {
        let t = small_table();
        assert!(matches!(
            t.eval_h(5, &[ex(0, 1)]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            t.eval_h(0, &[ex(0, 1), ex(0, 1)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            t.eval_h(0, &[ex(-1, 2)]),
            Err(Error::NegativeAlpha { .. })
        ));
    }

    #[test]
    fn infinite_candidates_never_minimize() {
        let t = ObjectiveTable::new(
            1,
            vec![
                Candidate {
                    id: "inf".into(),
                    point: None,
                    f: Ext::PosInf,
                    g: vec![ex(-10, 1)],
                },
                Candidate::new("fin", ex(3, 1), vec![ex(1, 1)]),
            ],
        )
        .unwrap();
        let r = t.min_at(&[ex(2, 1)]).unwrap();
        assert_eq!(r.argmin, vec![1]);
        assert!(r.value.is_eq(&ex(5, 1)));
    }

    #[test]
    fn duplicate_candidates_tie_everywhere() {
        let t = ObjectiveTable::new(
            1,
            vec![
                Candidate::new("u", ex(1, 1), vec![ex(2, 1)]),
                Candidate::new("u-copy", ex(1, 1), vec![ex(2, 1)]),
            ],
        )
        .unwrap();
        for k in 0..5 {
            let r = t.min_at(&[ex(k, 1)]).unwrap();
            assert_eq!(r.argmin, vec![0, 1]);
        }
    }

    #[test]
    fn eval_h_is_affine_in_alpha() {
        // exactness makes the midpoint identity an equality:
        // H(a) + H(a') = 2 H((a + a') / 2)
        let t = small_table();
        let two = ex(2, 1);
        let pairs = [
            (ex(0, 1), ex(3, 4)),
            (ex(1, 3), ex(7, 5)),
            (ex(2, 7), ex(2, 7)),
        ];
        for (a, b) in pairs {
            let mid = (a.clone() + b.clone()) / two.clone();
            for i in 0..t.len() {
                let lhs = t
                    .eval_h(i, std::slice::from_ref(&a))
                    .unwrap()
                    .finite()
                    .unwrap()
                    .clone()
                    + t.eval_h(i, std::slice::from_ref(&b))
                        .unwrap()
                        .finite()
                        .unwrap()
                        .clone();
                let rhs = two.clone()
                    * t.eval_h(i, std::slice::from_ref(&mid))
                        .unwrap()
                        .finite()
                        .unwrap()
                        .clone();
                assert!(lhs.is_eq(&rhs));
            }
        }
    }

    #[test]
    fn all_infinite_is_rejected() {
        let r = ObjectiveTable::<ExactScalar>::new(
            1,
            vec![Candidate {
                id: "inf".into(),
                point: None,
                f: Ext::PosInf,
                g: vec![ex(0, 1)],
            }],
        );
        assert!(matches!(r, Err(Error::AllInfinite)));
    }
}
