//! Exact univariate polynomials over the rationals.
//!
//! Provides just enough algebra for certified critical-point analysis:
//! evaluation, derivatives, Euclidean division, gcd / squarefree part, Sturm
//! chains with sign-variation root counting, bisection refinement of
//! isolating intervals, and interval-arithmetic evaluation for rigorous
//! enclosures of polynomial values over an interval.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Scalar};

/// Dense polynomial, coefficients low-to-high, no trailing zeros
/// (the zero polynomial has no coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<ExactScalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_val()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| ExactScalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| ExactScalar::from_int((i + 1) as i64) * c.clone())
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(ExactScalar::zero);
            let b = other
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(ExactScalar::zero);
            out.push(a + b);
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = quotient * divisor + remainder` and `deg r < deg divisor`.
    /// Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let dlc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ExactScalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd; // power of the quotient term
            let t = rem.last().unwrap().clone() / dlc.clone();
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let updated = rem[k + i].clone() - t.clone() * dc.clone();
                rem[k + i] = updated;
            }
            debug_assert!(rem.last().unwrap().is_zero_val());
            rem.pop();
            quot[k] = t;
            while rem.last().is_some_and(|c| c.is_zero_val()) {
                rem.pop();
            }
        }
        (Polynomial::new(quot), Polynomial { coeffs: rem })
    }

    /// Divides by the absolute value of the leading coefficient. Keeps the
    /// sign pattern while taming coefficient growth in remainder sequences.
    fn normalized(self) -> Polynomial {
        match self.leading() {
            None => self,
            Some(lc) => {
                let scale = lc.abs_val();
                self.scale(&(ExactScalar::one() / scale))
            }
        }
    }

    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone().normalized();
        let mut b = other.clone().normalized();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.normalized();
        }
        a
    }

    /// The radical `self / gcd(self, self')`: same roots, all simple.
    pub fn squarefree_part(&self) -> Polynomial {
        if self.is_zero() || self.degree() == Some(0) {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        q
    }

    /// Rigorous enclosure of the polynomial's range over `[x.lo, x.hi]`,
    /// by Horner evaluation in interval arithmetic.
    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let mut acc = Interval::point(ExactScalar::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add_point(c);
        }
        acc
    }
}

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct Interval {
    pub lo: ExactScalar,
    pub hi: ExactScalar,
}

impl Interval {
    pub fn new(lo: ExactScalar, hi: ExactScalar) -> Self {
        debug_assert!(lo.is_le(&hi));
        Interval { lo, hi }
    }

    pub fn point(v: ExactScalar) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo.is_eq(&self.hi)
    }

    pub fn width(&self) -> ExactScalar {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> ExactScalar {
        (self.lo.clone() + self.hi.clone()) / ExactScalar::from_int(2)
    }

    fn mul(&self, other: &Interval) -> Interval {
        let candidates = [
            self.lo.clone() * other.lo.clone(),
            self.lo.clone() * other.hi.clone(),
            self.hi.clone() * other.lo.clone(),
            self.hi.clone() * other.hi.clone(),
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            lo = lo.min_val(c.clone());
            hi = hi.max_val(c.clone());
        }
        Interval { lo, hi }
    }

    fn add_point(&self, c: &ExactScalar) -> Interval {
        Interval {
            lo: self.lo.clone() + c.clone(),
            hi: self.hi.clone() + c.clone(),
        }
    }

    /// Distance between two disjoint intervals; zero if they overlap.
    pub fn gap(&self, other: &Interval) -> ExactScalar {
        if self.hi.is_lt(&other.lo) {
            other.lo.clone() - self.hi.clone()
        } else if other.hi.is_lt(&self.lo) {
            self.lo.clone() - other.hi.clone()
        } else {
            ExactScalar::zero()
        }
    }
}

/// Sturm chain of a squarefree polynomial. Sign variations with zeros dropped
/// count roots on half-open intervals `(a, b]`.
pub struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    pub fn new(squarefree: &Polynomial) -> Self {
        let mut chain = vec![
            squarefree.clone().normalized(),
            squarefree.derivative().normalized(),
        ];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&ExactScalar::from_int(-1)).normalized());
        }
        SturmChain { chain }
    }

    pub fn sign_variations(&self, x: &ExactScalar) -> usize {
        let mut last: Option<Ordering> = None;
        let mut variations = 0;
        for p in &self.chain {
            let v = p.eval(x);
            let sign = v.scalar_cmp(&ExactScalar::zero());
            if sign == Ordering::Equal {
                continue;
            }
            if let Some(prev) = last {
                if prev != sign {
                    variations += 1;
                }
            }
            last = Some(sign);
        }
        variations
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &ExactScalar, b: &ExactScalar) -> usize {
        self.sign_variations(a) - self.sign_variations(b)
    }
}

/// Isolates every real root of `poly` inside `[lo, hi]` and refines each
/// isolating interval to width at most `limit`.
///
/// `poly` need not be squarefree: isolation runs on the squarefree part, so
/// multiple roots are found once. A root hit exactly (at an endpoint or a
/// bisection midpoint) comes back as a zero-width interval.
pub fn isolate_roots(
    poly: &Polynomial,
    lo: &ExactScalar,
    hi: &ExactScalar,
    limit: &ExactScalar,
) -> Result<Vec<Interval>> {
    if poly.is_zero() {
        return Err(Error::InvalidPolynomial(
            "cannot isolate roots of the zero polynomial".into(),
        ));
    }
    if !lo.is_lt(hi) {
        return Err(Error::InvalidPolynomial(format!(
            "window [{lo}, {hi}] is empty"
        )));
    }
    let sf = poly.squarefree_part();
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&sf);
    let mut out = Vec::new();
    // the half-open counting convention excludes the left endpoint
    if sf.eval(lo).is_zero_val() {
        out.push(Interval::point(lo.clone()));
    }
    let mut stack = vec![(lo.clone(), hi.clone())];
    let mut isolating = Vec::new();
    while let Some((a, b)) = stack.pop() {
        match chain.count_roots(&a, &b) {
            0 => {}
            1 => isolating.push((a, b)),
            _ => {
                let mid = (a.clone() + b.clone()) / ExactScalar::from_int(2);
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    // stack order is arbitrary; sort isolating intervals by position
    isolating.sort_by(|x, y| x.0.key_cmp(&y.0));
    for (a, b) in isolating {
        out.push(refine(&sf, a, b, limit));
    }
    out.sort_by(|x, y| x.lo.key_cmp(&y.lo));
    Ok(out)
}

/// Bisection refinement of an isolating interval `(a, b]` holding exactly one
/// simple root. The root is a sign change, so comparing midpoint signs with
/// the right endpoint decides the half; an exact zero collapses the interval.
fn refine(
    sf: &Polynomial,
    mut a: ExactScalar,
    mut b: ExactScalar,
    limit: &ExactScalar,
) -> Interval {
    let mut fb = sf.eval(&b);
    if fb.is_zero_val() {
        return Interval::point(b);
    }
    let two = ExactScalar::from_int(2);
    while (b.clone() - a.clone()).is_gt(limit) {
        let mid = (a.clone() + b.clone()) / two.clone();
        let fm = sf.eval(&mid);
        if fm.is_zero_val() {
            return Interval::point(mid);
        }
        if fm.is_positive() == fb.is_positive() {
            b = mid;
            fb = fm;
        } else {
            a = mid;
        }
    }
    Interval::new(a, b)
}
