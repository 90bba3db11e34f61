//! Scalar arithmetic backends.
//!
//! All analysis code is generic over [`Scalar`]. Two backends exist:
//!
//! * [`ExactScalar`] — arbitrary-precision rationals. Every operation is
//!   exact, so strict inequalities and equalities of the verified identities
//!   are decidable. This is the default backend and the only one on which
//!   certification-grade checks run.
//! * [`ApproxScalar`] — binary64 plus a comparison tolerance. Useful for
//!   oracle-driven scans of large inputs; results are indicative only.
//!
//! The trait deliberately separates two orderings: [`Scalar::scalar_cmp`] is
//! the *decision* order (tolerance-aware on the approx backend) used for
//! argmin ties, breakpoint matching and the like, while [`Scalar::key_cmp`]
//! is a plain total order safe for sorting. On the exact backend the two
//! coincide.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which arithmetic backend a value (or a whole table) lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Approx,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => write!(f, "exact"),
            Backend::Approx => write!(f, "approx"),
        }
    }
}

/// Wire form of a scalar in the JSON file formats: exact values travel as
/// `"p/q"` strings, approximate values as plain numbers.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarRepr {
    Text(String),
    Number(f64),
}

/// Arithmetic interface shared by the exact and approximate backends.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;

    /// The exact ratio `num/den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Decision ordering. On the exact backend this is the true order; on the
    /// approximate backend values within `tol * max(1, |a|, |b|)` compare
    /// equal.
    fn scalar_cmp(&self, other: &Self) -> Ordering;

    /// Total ordering for sorting. Never merges distinct stored values, so it
    /// is safe to hand to `sort_by` even on the approximate backend.
    fn key_cmp(&self, other: &Self) -> Ordering;

    fn to_f64(&self) -> f64;

    fn to_repr(&self) -> ScalarRepr;

    /// Reads a value from its wire form. `tol` seeds the comparison tolerance
    /// on the approximate backend and is ignored by the exact one.
    fn from_repr(repr: &ScalarRepr, tol: f64) -> Result<Self>;

    /// Parses `"p/q"`, `"p"` or `"a.b"` forms. `tol` as in [`Self::from_repr`].
    fn parse(text: &str, tol: f64) -> Result<Self>;

    /// Decimal rendering with `digits` fractional digits, rounding half away
    /// from zero.
    fn decimal(&self, digits: usize) -> String;

    fn is_eq(&self, other: &Self) -> bool {
        self.scalar_cmp(other) == Ordering::Equal
    }
    fn is_lt(&self, other: &Self) -> bool {
        self.scalar_cmp(other) == Ordering::Less
    }
    fn is_le(&self, other: &Self) -> bool {
        self.scalar_cmp(other) != Ordering::Greater
    }
    fn is_gt(&self, other: &Self) -> bool {
        self.scalar_cmp(other) == Ordering::Greater
    }
    fn is_ge(&self, other: &Self) -> bool {
        self.scalar_cmp(other) != Ordering::Less
    }
    fn is_zero_val(&self) -> bool {
        self.is_eq(&Self::zero())
    }
    fn is_negative(&self) -> bool {
        self.is_lt(&Self::zero())
    }
    fn is_positive(&self) -> bool {
        self.is_gt(&Self::zero())
    }
    fn abs_val(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn min_val(self, other: Self) -> Self {
        if other.key_cmp(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
    fn max_val(self, other: Self) -> Self {
        if other.key_cmp(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }
}

// ---------------------------------------------------------------------------
// Exact backend
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational. Stored in lowest terms with a positive
/// denominator (maintained by the underlying rational type); arithmetic never
/// rounds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    /// Builds `num/den`; fails on a zero denominator.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ParseScalar {
                text: format!("{num}/{den}"),
                detail: "zero denominator".into(),
            });
        }
        Ok(ExactScalar(BigRational::new(num, den)))
    }

    pub fn from_big(r: BigRational) -> Self {
        ExactScalar(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// `2^-exp` as an exact rational, for any nonnegative `exp`.
    pub fn pow2_neg(exp: usize) -> Self {
        ExactScalar(BigRational::new(BigInt::one(), BigInt::one() << exp))
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

macro_rules! exact_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                ExactScalar((&self.0).$method(&rhs.0))
            }
        }
    };
}

exact_binop!(Add, add);
exact_binop!(Sub, sub);
exact_binop!(Mul, mul);
exact_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

fn parse_exact(text: &str) -> Result<ExactScalar> {
    let err = |detail: &str| Error::ParseScalar {
        text: text.into(),
        detail: detail.into(),
    };
    let t = text.trim();
    if t.is_empty() {
        return Err(err("empty"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = den.trim().parse().map_err(|_| err("bad denominator"))?;
        return ExactScalar::new(n, d);
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let i: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| err("bad integer part"))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad fractional part"));
        }
        let f: BigInt = frac_part.parse().map_err(|_| err("bad fractional part"))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(f, scale.clone());
        let whole = BigRational::from_integer(i);
        let value = if neg { whole - frac } else { whole + frac };
        return Ok(ExactScalar(value));
    }
    let n: BigInt = t.parse().map_err(|_| err("not an integer or ratio"))?;
    Ok(ExactScalar(BigRational::from_integer(n)))
}

impl Scalar for ExactScalar {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    fn from_int(n: i64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactScalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn scalar_cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    fn to_repr(&self) -> ScalarRepr {
        ScalarRepr::Text(self.to_string())
    }

    fn from_repr(repr: &ScalarRepr, _tol: f64) -> Result<Self> {
        match repr {
            ScalarRepr::Text(s) => parse_exact(s),
            ScalarRepr::Number(v) => {
                if v.fract() == 0.0 && v.abs() <= i64::MAX as f64 {
                    Ok(ExactScalar::from_int(*v as i64))
                } else {
                    Err(Error::ParseScalar {
                        text: v.to_string(),
                        detail: "exact backend accepts integers or \"p/q\" strings".into(),
                    })
                }
            }
        }
    }

    fn parse(text: &str, _tol: f64) -> Result<Self> {
        parse_exact(text)
    }

    fn decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let rounded = scaled.round().to_integer();
        if digits == 0 {
            return rounded.to_string();
        }
        let neg = rounded.is_negative();
        let mag = rounded.abs().to_string();
        let (int_part, frac_part) = if mag.len() > digits {
            let split = mag.len() - digits;
            (mag[..split].to_string(), mag[split..].to_string())
        } else {
            ("0".to_string(), format!("{mag:0>digits$}"))
        };
        format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_part)
    }
}

// ---------------------------------------------------------------------------
// Approximate backend
// ---------------------------------------------------------------------------

/// Binary64 value with a comparison tolerance. Equality decisions use
/// `|a - b| <= tol * max(1, |a|, |b|)`; the tolerance is carried along through
/// arithmetic (combining by maximum) so it is available wherever a comparison
/// happens.
#[derive(Debug, Clone, Copy)]
pub struct ApproxScalar {
    value: f64,
    tol: f64,
}

impl ApproxScalar {
    pub const DEFAULT_TOL: f64 = 1e-9;

    pub fn new(value: f64, tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        ApproxScalar { value, tol }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn with(&self, value: f64, other: &ApproxScalar) -> ApproxScalar {
        ApproxScalar {
            value,
            tol: self.tol.max(other.tol),
        }
    }
}

impl fmt::Display for ApproxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for ApproxScalar {
    type Output = ApproxScalar;
    fn add(self, rhs: ApproxScalar) -> ApproxScalar {
        self.with(self.value + rhs.value, &rhs)
    }
}

impl Sub for ApproxScalar {
    type Output = ApproxScalar;
    fn sub(self, rhs: ApproxScalar) -> ApproxScalar {
        self.with(self.value - rhs.value, &rhs)
    }
}

impl Mul for ApproxScalar {
    type Output = ApproxScalar;
    fn mul(self, rhs: ApproxScalar) -> ApproxScalar {
        self.with(self.value * rhs.value, &rhs)
    }
}

impl Div for ApproxScalar {
    type Output = ApproxScalar;
    fn div(self, rhs: ApproxScalar) -> ApproxScalar {
        self.with(self.value / rhs.value, &rhs)
    }
}

impl Neg for ApproxScalar {
    type Output = ApproxScalar;
    fn neg(self) -> ApproxScalar {
        ApproxScalar {
            value: -self.value,
            tol: self.tol,
        }
    }
}

impl Scalar for ApproxScalar {
    const BACKEND: Backend = Backend::Approx;

    fn zero() -> Self {
        ApproxScalar::new(0.0, Self::DEFAULT_TOL)
    }

    fn one() -> Self {
        ApproxScalar::new(1.0, Self::DEFAULT_TOL)
    }

    fn from_int(n: i64) -> Self {
        ApproxScalar::new(n as f64, Self::DEFAULT_TOL)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ApproxScalar::new(num as f64 / den as f64, Self::DEFAULT_TOL)
    }

    fn scalar_cmp(&self, other: &Self) -> Ordering {
        let tol = self.tol.max(other.tol);
        let gap = (self.value - other.value).abs();
        if gap <= tol * max3(1.0, self.value.abs(), other.value.abs()) {
            Ordering::Equal
        } else {
            self.value.total_cmp(&other.value)
        }
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value)
    }

    fn to_f64(&self) -> f64 {
        self.value
    }

    fn to_repr(&self) -> ScalarRepr {
        ScalarRepr::Number(self.value)
    }

    fn from_repr(repr: &ScalarRepr, tol: f64) -> Result<Self> {
        match repr {
            ScalarRepr::Number(v) => Ok(ApproxScalar::new(*v, tol)),
            ScalarRepr::Text(s) => Self::parse(s, tol),
        }
    }

    fn parse(text: &str, tol: f64) -> Result<Self> {
        let exact = parse_exact(text)?;
        Ok(ApproxScalar::new(exact.to_f64(), tol))
    }

    fn decimal(&self, digits: usize) -> String {
        format!("{:.*}", digits, self.value)
    }
}

fn max3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).max(c)
}

// ---------------------------------------------------------------------------
// Extended scalars (finite or +infinity)
// ---------------------------------------------------------------------------

/// A scalar extended with `+inf`. Candidate objective values `f` may be
/// infinite; such candidates are valid table entries but never minimizers.
#[derive(Debug, Clone)]
pub enum Ext<S> {
    Finite(S),
    PosInf,
}

impl<S: Scalar> Ext<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Ext::Finite(v) => Some(v),
            Ext::PosInf => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn cmp_ext(&self, other: &Ext<S>) -> Ordering {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => a.scalar_cmp(b),
            (Ext::Finite(_), Ext::PosInf) => Ordering::Less,
            (Ext::PosInf, Ext::Finite(_)) => Ordering::Greater,
            (Ext::PosInf, Ext::PosInf) => Ordering::Equal,
        }
    }

    /// `self + t`, absorbing into `+inf`.
    pub fn add_finite(&self, t: &S) -> Ext<S> {
        match self {
            Ext::Finite(v) => Ext::Finite(v.clone() + t.clone()),
            Ext::PosInf => Ext::PosInf,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_display_and_parse_round_trip() {
        let cases = ["17/8", "-3/4", "0", "5", "-12"];
        for c in cases {
            let v = ExactScalar::parse(c, 0.0).unwrap();
            assert_eq!(v.to_string(), c);
        }
        // non-lowest-terms and decimal inputs normalize
        assert_eq!(ExactScalar::parse("6/8", 0.0).unwrap().to_string(), "3/4");
        assert_eq!(ExactScalar::parse("0.25", 0.0).unwrap().to_string(), "1/4");
        assert_eq!(ExactScalar::parse("-1.5", 0.0).unwrap().to_string(), "-3/2");
    }

    #[test]
    fn exact_invariants_lowest_terms_positive_denominator() {
        let v = ExactScalar::new(BigInt::from(4), BigInt::from(-6)).unwrap();
        assert_eq!(v.to_string(), "-2/3");
        assert!(v.denom() > &BigInt::zero());
    }

    #[test]
    fn exact_decimal_rendering() {
        let v = ExactScalar::from_ratio(-1, 4);
        assert_eq!(v.decimal(3), "-0.250");
        assert_eq!(ExactScalar::from_ratio(7, 8).decimal(2), "0.88");
        assert_eq!(ExactScalar::from_int(3).decimal(0), "3");
        assert_eq!(ExactScalar::from_ratio(1, 3).decimal(4), "0.3333");
    }

    #[test]
    fn approx_tolerance_equality() {
        let a = ApproxScalar::new(1.0, 1e-9);
        let b = ApproxScalar::new(1.0 + 5e-10, 1e-9);
        assert_eq!(a.scalar_cmp(&b), Ordering::Equal);
        let c = ApproxScalar::new(1.0 + 5e-9, 1e-9);
        assert_eq!(a.scalar_cmp(&c), Ordering::Less);
        // key order still separates tolerance-equal values
        assert_eq!(a.key_cmp(&b), Ordering::Less);
    }

    #[test]
    fn ext_ordering() {
        let inf: Ext<ExactScalar> = Ext::PosInf;
        let two = Ext::Finite(ExactScalar::from_int(2));
        assert_eq!(inf.cmp_ext(&two), Ordering::Greater);
        assert_eq!(inf.cmp_ext(&Ext::PosInf), Ordering::Equal);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = ExactScalar> {
            (-10_000i64..=10_000, 1i64..=1_000).prop_map(|(n, d)| ExactScalar::from_ratio(n, d))
        }

        proptest! {
            #[test]
            fn add_then_subtract_is_identity(a in rational(), b in rational()) {
                let round = (a.clone() + b.clone()) - b;
                prop_assert!(round.is_eq(&a));
            }

            #[test]
            fn denominators_stay_positive(a in rational(), b in rational()) {
                for v in [a.clone() + b.clone(), a.clone() - b.clone(), a * b] {
                    prop_assert!(v.denom() > &num_bigint::BigInt::from(0));
                }
            }

            #[test]
            fn parse_display_round_trip(a in rational()) {
                let back = ExactScalar::parse(&a.to_string(), 0.0).unwrap();
                prop_assert!(back.is_eq(&a));
            }
        }
    }
}
