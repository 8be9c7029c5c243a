//! Exact rational coordinates with a checked dyadic view.
//!
//! Every coordinate in the crate is an [`ExactNumber`]. Values are kept in
//! lowest terms, so equality, ordering and hashing agree with the rationals.
//! The textual form is `p/q` (or a bare integer), and `p/2^q` is accepted on
//! input.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number.
///
/// Dyadic values are held as `p / 2^q` with `q = 0` or `p` odd, which makes
/// addition, multiplication and comparison gcd-free. Other rationals fall back
/// to a reduced fraction. The representation is canonical, so structural
/// equality is numeric equality.
#[derive(Clone)]
pub struct ExactNumber(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Dyadic {
        p: BigInt,
        q: u64,
    },
    /// Denominator is not a power of two.
    Ratio(BigRational),
}

/// Canonical `p / 2^q` form of a dyadic rational in `[0, 1]`.
///
/// `q = 0` or `p` odd; zero is `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicForm {
    pub p: BigUint,
    pub q: u64,
}

impl DyadicForm {
    pub fn to_number(&self) -> ExactNumber {
        ExactNumber::dyadic(BigInt::from(self.p.clone()), self.q)
    }
}

/// Binary operations accepted by [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    Midpoint,
    Compare,
}

/// Result of [`arith`]: a number, or an ordering for [`ArithOp::Compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithValue {
    Number(ExactNumber),
    Ordering(Ordering),
}

/// Applies `op` to `a` and `b` exactly.
pub fn arith(a: &ExactNumber, b: &ExactNumber, op: ArithOp) -> Result<ArithValue> {
    let n = match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
        ArithOp::Min => a.min(b).clone(),
        ArithOp::Max => a.max(b).clone(),
        ArithOp::Midpoint => a.midpoint(b),
        ArithOp::Compare => return Ok(ArithValue::Ordering(a.cmp(b))),
    };
    Ok(ArithValue::Number(n))
}

fn trailing_zeros(p: &BigInt) -> u64 {
    p.magnitude().trailing_zeros().unwrap_or(0)
}

/// Power-of-two exponent of a positive magnitude, if it is one.
fn pow2_exponent(m: &BigUint) -> Option<u64> {
    (m.count_ones() == 1).then(|| m.trailing_zeros().unwrap_or(0))
}

impl ExactNumber {
    /// Builds a canonical dyadic from any `p / 2^q`.
    fn dyadic_normalized(p: BigInt, q: u64) -> Self {
        if p.is_zero() {
            return ExactNumber(Repr::Dyadic { p, q: 0 });
        }
        let shift = trailing_zeros(&p).min(q);
        ExactNumber(Repr::Dyadic {
            p: p >> shift,
            q: q - shift,
        })
    }

    /// `p * 2^e` for any integer exponent.
    fn dyadic_signed_exp(p: BigInt, e: i64) -> Self {
        if e >= 0 {
            ExactNumber::dyadic_normalized(p << e as u64, 0)
        } else {
            ExactNumber::dyadic_normalized(p, (-e) as u64)
        }
    }

    fn from_rational(r: BigRational) -> Self {
        match pow2_exponent(r.denom().magnitude()) {
            Some(q) => {
                let (p, _) = r.into();
                ExactNumber(Repr::Dyadic { p, q })
            }
            None => ExactNumber(Repr::Ratio(r)),
        }
    }

    fn to_rational(&self) -> BigRational {
        match &self.0 {
            Repr::Dyadic { p, q } => BigRational::new_raw(p.clone(), BigInt::one() << *q),
            Repr::Ratio(r) => r.clone(),
        }
    }

    pub fn zero() -> Self {
        ExactNumber(Repr::Dyadic {
            p: BigInt::zero(),
            q: 0,
        })
    }

    pub fn one() -> Self {
        ExactNumber(Repr::Dyadic {
            p: BigInt::one(),
            q: 0,
        })
    }

    pub fn from_integer(n: i64) -> Self {
        ExactNumber(Repr::Dyadic {
            p: BigInt::from(n),
            q: 0,
        })
    }

    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactNumber::from_rational(BigRational::new(
            numer.into(),
            denom,
        )))
    }

    /// `p / 2^q`.
    pub fn dyadic(p: impl Into<BigInt>, q: u64) -> Self {
        ExactNumber::dyadic_normalized(p.into(), q)
    }

    /// `1 - 2^{-k}`.
    pub fn one_minus_pow2(k: u64) -> Self {
        ExactNumber::dyadic_normalized((BigInt::one() << k) - 1, k)
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Dyadic { p, .. } => p.clone(),
            Repr::Ratio(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Dyadic { q, .. } => BigInt::one() << *q,
            Repr::Ratio(r) => r.denom().clone(),
        }
    }

    /// The value as a reduced `BigRational`.
    pub fn as_rational(&self) -> BigRational {
        self.to_rational()
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Dyadic { p, .. } if p.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Dyadic { p, q: 0 } if p.is_one())
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Dyadic { p, .. } => p.is_negative(),
            Repr::Ratio(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(&self.0, Repr::Dyadic { q: 0, .. })
    }

    /// True for `0 <= self <= 1`.
    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && self <= &ExactNumber::one()
    }

    pub fn checked_div(&self, other: &ExactNumber) -> Result<ExactNumber> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let (Repr::Dyadic { p: p1, q: q1 }, Repr::Dyadic { p: p2, q: q2 }) = (&self.0, &other.0)
        {
            let e = *q2 as i64 - *q1 as i64;
            if let Some(k) = pow2_exponent(p2.magnitude()) {
                // (p1 / 2^q1) / (±2^k / 2^q2) = ±p1 * 2^(q2 - q1 - k)
                let p = if p2.is_negative() {
                    -p1.clone()
                } else {
                    p1.clone()
                };
                return Ok(ExactNumber::dyadic_signed_exp(p, e - k as i64));
            }
            let (quot, rem) = p1.div_rem(p2);
            if rem.is_zero() {
                return Ok(ExactNumber::dyadic_signed_exp(quot, e));
            }
        }
        Ok(ExactNumber::from_rational(
            self.to_rational() / other.to_rational(),
        ))
    }

    pub fn midpoint(&self, other: &ExactNumber) -> ExactNumber {
        (self + other).scale_pow2(-1)
    }

    /// Multiplies by `2^k` (`k` may be negative).
    pub fn scale_pow2(&self, k: i64) -> ExactNumber {
        match &self.0 {
            Repr::Dyadic { p, q } => ExactNumber::dyadic_signed_exp(p.clone(), k - *q as i64),
            Repr::Ratio(r) => {
                let factor = BigRational::from_integer(BigInt::one() << k.unsigned_abs());
                ExactNumber::from_rational(if k >= 0 { r * factor } else { r / factor })
            }
        }
    }

    /// Exponent `q` of the reduced denominator when it is a power of two.
    pub fn dyadic_exponent(&self) -> Option<u64> {
        match &self.0 {
            Repr::Dyadic { q, .. } => Some(*q),
            Repr::Ratio(_) => None,
        }
    }

    pub fn is_dyadic(&self) -> bool {
        matches!(self.0, Repr::Dyadic { .. })
    }

    /// Canonical `(p, q)` view, or [`Error::NotDyadic`] when the reduced
    /// denominator is not a power of two. Negative values are rejected.
    pub fn as_dyadic(&self) -> Result<DyadicForm> {
        match &self.0 {
            Repr::Dyadic { p, .. } if p.is_negative() => Err(Error::OutOfRange(self.to_string())),
            Repr::Dyadic { p, q } => Ok(DyadicForm {
                p: p.magnitude().clone(),
                q: *q,
            }),
            Repr::Ratio(_) => Err(Error::NotDyadic(self.to_string())),
        }
    }

    /// If `self = 2^k` for some integer `k`, returns `k`.
    pub fn log2_exact(&self) -> Option<i64> {
        match &self.0 {
            Repr::Dyadic { p, q } if p.is_positive() => {
                pow2_exponent(p.magnitude()).map(|e| e as i64 - *q as i64)
            }
            _ => None,
        }
    }

    /// Parses and additionally requires `0 <= value <= 1`.
    pub fn parse_coordinate(text: &str) -> Result<Self> {
        let x = parse_number(text)?;
        if !x.in_unit_interval() {
            return Err(Error::OutOfRange(text.to_string()));
        }
        Ok(x)
    }

    pub fn to_f64_lossy(&self) -> Option<f64> {
        self.to_rational().to_f64()
    }
}

fn align(p1: &BigInt, q1: u64, p2: &BigInt, q2: u64) -> (BigInt, BigInt, u64) {
    match q1.cmp(&q2) {
        Ordering::Equal => (p1.clone(), p2.clone(), q1),
        Ordering::Less => (p1 << (q2 - q1), p2.clone(), q2),
        Ordering::Greater => (p1.clone(), p2 << (q1 - q2), q1),
    }
}

impl PartialEq for ExactNumber {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for ExactNumber {}

impl Hash for ExactNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for ExactNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Dyadic { p: p1, q: q1 }, Repr::Dyadic { p: p2, q: q2 }) => {
                let (s1, s2) = (p1.sign(), p2.sign());
                if s1 != s2 {
                    return s1.cmp(&s2);
                }
                if q1 == q2 {
                    return p1.cmp(p2);
                }
                let (a, b, _) = align(p1, *q1, p2, *q2);
                a.cmp(&b)
            }
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialOrd for ExactNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(text.as_bytes(), 10)
}

/// Parses `INT`, `INT/INT` or `INT/2^INT`; the result is reduced.
pub fn parse_number(text: &str) -> Result<ExactNumber> {
    let bad = || Error::MalformedNumber(text.to_string());
    match text.split_once('/') {
        None => Ok(ExactNumber::dyadic_normalized(
            parse_int(text).ok_or_else(bad)?,
            0,
        )),
        Some((num, den)) => {
            let num = parse_int(num).ok_or_else(bad)?;
            if let Some(exp) = den.strip_prefix("2^") {
                if exp.is_empty() || !exp.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let q: u64 = exp.parse().map_err(|_| bad())?;
                // keeps 2^q allocation sane
                if q > 1 << 20 {
                    return Err(bad());
                }
                Ok(ExactNumber::dyadic(num, q))
            } else {
                let den = parse_int(den).ok_or_else(bad)?;
                if den.sign() == Sign::Minus {
                    return Err(bad());
                }
                ExactNumber::ratio(num, den)
            }
        }
    }
}

impl FromStr for ExactNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_number(s)
    }
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Dyadic { p, q: 0 } => write!(f, "{p}"),
            Repr::Dyadic { p, q } => write!(f, "{}/{}", p, BigInt::one() << *q),
            Repr::Ratio(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<BigRational> for ExactNumber {
    fn from(r: BigRational) -> Self {
        ExactNumber::from_rational(r)
    }
}

impl From<i64> for ExactNumber {
    fn from(n: i64) -> Self {
        ExactNumber::from_integer(n)
    }
}

impl Add<&ExactNumber> for &ExactNumber {
    type Output = ExactNumber;
    fn add(self, rhs: &ExactNumber) -> ExactNumber {
        match (&self.0, &rhs.0) {
            (Repr::Dyadic { p: p1, q: q1 }, Repr::Dyadic { p: p2, q: q2 }) => {
                let (a, b, q) = align(p1, *q1, p2, *q2);
                ExactNumber::dyadic_normalized(a + b, q)
            }
            _ => ExactNumber::from_rational(self.to_rational() + rhs.to_rational()),
        }
    }
}

impl Sub<&ExactNumber> for &ExactNumber {
    type Output = ExactNumber;
    fn sub(self, rhs: &ExactNumber) -> ExactNumber {
        match (&self.0, &rhs.0) {
            (Repr::Dyadic { p: p1, q: q1 }, Repr::Dyadic { p: p2, q: q2 }) => {
                let (a, b, q) = align(p1, *q1, p2, *q2);
                ExactNumber::dyadic_normalized(a - b, q)
            }
            _ => ExactNumber::from_rational(self.to_rational() - rhs.to_rational()),
        }
    }
}

impl Mul<&ExactNumber> for &ExactNumber {
    type Output = ExactNumber;
    fn mul(self, rhs: &ExactNumber) -> ExactNumber {
        match (&self.0, &rhs.0) {
            (Repr::Dyadic { p: p1, q: q1 }, Repr::Dyadic { p: p2, q: q2 }) => {
                ExactNumber::dyadic_normalized(p1 * p2, q1 + q2)
            }
            _ => ExactNumber::from_rational(self.to_rational() * rhs.to_rational()),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactNumber {
            type Output = ExactNumber;
            fn $method(self, rhs: ExactNumber) -> ExactNumber {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ExactNumber {
    type Output = ExactNumber;
    fn neg(self) -> ExactNumber {
        match self.0 {
            Repr::Dyadic { p, q } => ExactNumber(Repr::Dyadic { p: -p, q }),
            Repr::Ratio(r) => ExactNumber(Repr::Ratio(-r)),
        }
    }
}

impl Serialize for ExactNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_number(&s).map_err(serde::de::Error::custom)
    }
}
