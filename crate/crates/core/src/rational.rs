//! Exact rationals, closed rational intervals and certified square roots.
//!
//! Every quantity the prover reasons about lives here. [`Rational`] is an
//! always-canonical big fraction; [`RatInterval`] is a closed interval whose
//! arithmetic is exact (rationals are closed under `+ - * /`), so containment
//! holds without any outward rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

/// Decimal places used for square-root and interval bounds unless overridden.
pub const DEFAULT_DIGITS: u32 = 8;

/// Widening steps attempted when a floating-point seed fails to certify.
pub(crate) const MAX_WIDENINGS: u32 = 3;

/// Arbitrary-precision fraction, always stored in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ArithError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `10^-digits`
    pub fn decimal_step(digits: u32) -> Self {
        Rational(BigRational::new(BigInt::one(), pow10(digits)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational, ArithError> {
        Rational::one().checked_div(self)
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Nearest `f64`; huge or tiny magnitudes saturate rather than fail.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// Exact binary value of a finite float.
    pub fn from_f64_exact(x: f64) -> Result<Self, ArithError> {
        BigRational::from_f64(x)
            .map(Rational)
            .ok_or_else(|| ArithError::NonFinite(x.to_string()))
    }

    /// `round(x * 10^digits) / 10^digits`, rounding half away from zero in
    /// floating point before the exact conversion.
    pub fn from_f64_rounded(x: f64, digits: u32) -> Result<Self, ArithError> {
        if !x.is_finite() {
            return Err(ArithError::NonFinite(x.to_string()));
        }
        let scaled = (x * 10f64.powi(digits as i32)).round();
        let n = BigInt::from_f64(scaled).ok_or_else(|| ArithError::NonFinite(x.to_string()))?;
        Ok(Rational(BigRational::new(n, pow10(digits))))
    }

    /// Largest multiple of `10^-digits` that is `<= self`.
    pub fn floor_to_digits(&self, digits: u32) -> Self {
        let scale = pow10(digits);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        Rational(BigRational::new(scaled.floor().to_integer(), scale))
    }

    /// Smallest multiple of `10^-digits` that is `>= self`.
    pub fn ceil_to_digits(&self, digits: u32) -> Self {
        let scale = pow10(digits);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        Rational(BigRational::new(scaled.ceil().to_integer(), scale))
    }

    /// Decimal rendering rounded half away from zero to at most `places`
    /// digits after the point, trailing zeros trimmed but keeping one
    /// fractional digit (`2` prints as `2.0`).
    pub fn to_decimal_string(&self, places: u32) -> String {
        let scale = pow10(places);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let rounded = scaled.round().to_integer();
        let negative = rounded.is_negative();
        let (int_part, frac_part) = rounded.abs().div_rem(&scale);
        let mut frac = format!("{:0>width$}", frac_part, width = places as usize);
        while frac.len() > 1 && frac.ends_with('0') {
            frac.pop();
        }
        if frac.is_empty() {
            frac.push('0');
        }
        let sign = if negative { "-" } else { "" };
        format!("{sign}{int_part}.{frac}")
    }
}

pub(crate) fn pow10(digits: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), digits as usize)
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Integers print bare, everything else as `p / q`.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{} / {}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts integers (`-3`), fractions with optional spaces (`3914567 / 6250000`)
/// and plain decimals (`0.625`, `-.5`). Decimals convert exactly.
impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n = parse_integer(n.trim()).ok_or_else(bad)?;
            let d = d.trim();
            if d.starts_with('+') || d.starts_with('-') {
                return Err(bad());
            }
            let d = parse_integer(d).ok_or_else(bad)?;
            return Rational::new(n, d);
        }
        parse_decimal(t).ok_or_else(bad)
    }
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let mut n: BigInt = all.parse().ok()?;
    if negative {
        n = -n;
    }
    Some(Rational(BigRational::new(n, pow10(frac_part.len() as u32))))
}

/// Closed interval `[lo, hi]` of rationals, `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        if lo > hi {
            return Err(ArithError::InvertedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(RatInterval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &RatInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// Raises a negative lower endpoint to zero. Only sound when the quantity
    /// the interval encloses is known to be non-negative.
    pub fn clamp_nonnegative(&self) -> Self {
        let zero = Rational::zero();
        RatInterval {
            lo: if self.lo < zero {
                zero.clone()
            } else {
                self.lo.clone()
            },
            hi: if self.hi < zero {
                zero
            } else {
                self.hi.clone()
            },
        }
    }

    pub fn add(&self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }

    pub fn sub(&self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }

    pub fn mul(&self, rhs: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        min_max(products)
    }

    pub fn div(&self, rhs: &RatInterval) -> Result<RatInterval, ArithError> {
        if rhs.contains_zero() {
            return Err(ArithError::DivisorContainsZero);
        }
        let inv = RatInterval {
            lo: rhs.hi.recip()?,
            hi: rhs.lo.recip()?,
        };
        Ok(self.mul(&inv))
    }

    pub fn scale(&self, k: &Rational) -> RatInterval {
        self.mul(&RatInterval::point(k.clone()))
    }

    /// `[lo², hi²]` tightened for intervals that straddle zero.
    pub fn square(&self) -> RatInterval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let a = self.lo.square();
            let b = self.hi.square();
            RatInterval {
                lo: Rational::zero(),
                hi: if a > b { a } else { b },
            }
        } else {
            self.mul(self)
        }
    }
}

fn min_max(values: [Rational; 4]) -> RatInterval {
    let mut lo = values[0].clone();
    let mut hi = values[0].clone();
    for v in &values[1..] {
        if *v < lo {
            lo = v.clone();
        }
        if *v > hi {
            hi = v.clone();
        }
    }
    RatInterval { lo, hi }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of comparing two enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    True,
    False,
    Unknown,
}

/// Decides `a < b` for every pair of reals drawn from the two intervals.
pub fn certified_less(a: &RatInterval, b: &RatInterval) -> Certainty {
    if a.hi < b.lo {
        Certainty::True
    } else if b.hi <= a.lo {
        Certainty::False
    } else {
        Certainty::Unknown
    }
}

/// Certified `[l, u]` with `l² <= x <= u²`, seeded from the floating-point
/// root and rounded outward to `digits` decimal places.
pub fn sqrt_bounds(x: &Rational, digits: u32) -> Result<RatInterval, ArithError> {
    if x.is_negative() {
        return Err(ArithError::NegativeSqrt(x.to_string()));
    }
    if x.is_zero() {
        return Ok(RatInterval::point(Rational::zero()));
    }
    let seed = x.to_f64().sqrt();
    if !seed.is_finite() {
        return Err(ArithError::SqrtUncertified(x.to_string()));
    }
    let seed = Rational::from_f64_exact(seed)?;
    let step = Rational::decimal_step(digits);
    let mut lo = seed.floor_to_digits(digits);
    let mut hi = seed.ceil_to_digits(digits);

    let mut lo_ok = false;
    let mut hi_ok = false;
    for _ in 0..=MAX_WIDENINGS {
        if lo.is_negative() {
            lo = Rational::zero();
        }
        lo_ok = lo_ok || lo.square() <= *x;
        hi_ok = hi_ok || *x <= hi.square();
        if lo_ok && hi_ok {
            return Ok(RatInterval { lo, hi });
        }
        if !lo_ok {
            lo = &lo - &step;
        }
        if !hi_ok {
            hi = &hi + &step;
        }
    }
    Err(ArithError::SqrtUncertified(x.to_string()))
}

/// Encloses `√y` for every `y` in `interval`.
pub fn interval_sqrt(interval: &RatInterval, digits: u32) -> Result<RatInterval, ArithError> {
    if interval.lo.is_negative() {
        return Err(ArithError::NegativeSqrt(interval.lo.to_string()));
    }
    let lo = sqrt_bounds(&interval.lo, digits)?.lo;
    let hi = sqrt_bounds(&interval.hi, digits)?.hi;
    Ok(RatInterval { lo, hi })
}

impl PartialOrd<Rational> for RatInterval {
    /// Orders an interval against a point only when the comparison is certain.
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        if &self.hi < other {
            Some(Ordering::Less)
        } else if &self.lo > other {
            Some(Ordering::Greater)
        } else if &self.lo == other && &self.hi == other {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl PartialEq<Rational> for RatInterval {
    fn eq(&self, other: &Rational) -> bool {
        &self.lo == other && &self.hi == other
    }
}
