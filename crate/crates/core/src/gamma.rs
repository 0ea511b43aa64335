//! The ordered semigroup of nonnegative rationals extended by an absorbing
//! infinity, and suprema of (possibly infinite) families of its elements.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact nonnegative rational, used for coefficients and cut positions.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("negative value {0} is not an element of the semigroup")]
    Negative(String),
    #[error("cannot parse `{0}` as a rational or `inf`")]
    Parse(String),
}

/// An element of `[0, ∞) ∩ Q` together with `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GammaValue {
    Finite(Rational),
    Infinity,
}

impl GammaValue {
    pub fn zero() -> Self {
        GammaValue::Finite(Rational::zero())
    }

    pub fn one() -> Self {
        GammaValue::Finite(Rational::one())
    }

    pub fn finite(q: Rational) -> Result<Self, GammaError> {
        if q.is_negative() {
            return Err(GammaError::Negative(q.to_string()));
        }
        Ok(GammaValue::Finite(q))
    }

    /// `n/d` as a finite value; panics on negative input or zero denominator.
    pub fn ratio(n: i64, d: i64) -> Self {
        GammaValue::finite(Rational::new(BigInt::from(n), BigInt::from(d)))
            .expect("ratio must be nonnegative")
    }

    pub fn integer(n: u64) -> Self {
        GammaValue::Finite(Rational::from_integer(BigInt::from(n)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GammaValue::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GammaValue::Finite(q) if q.is_zero())
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            GammaValue::Finite(q) => Some(q),
            GammaValue::Infinity => None,
        }
    }

    /// Scalar multiple by a nonnegative integer, with `0 · ∞ = 0`.
    pub fn times(&self, n: u64) -> GammaValue {
        if n == 0 {
            return GammaValue::zero();
        }
        match self {
            GammaValue::Finite(q) => GammaValue::Finite(q * BigInt::from(n)),
            GammaValue::Infinity => GammaValue::Infinity,
        }
    }

    /// Multiple by a nonnegative rational, with `0 · ∞ = 0`.
    pub fn scale(&self, factor: &Rational) -> GammaValue {
        if factor.is_zero() {
            return GammaValue::zero();
        }
        match self {
            GammaValue::Finite(q) => GammaValue::Finite(q * factor),
            GammaValue::Infinity => GammaValue::Infinity,
        }
    }
}

impl Default for GammaValue {
    fn default() -> Self {
        GammaValue::zero()
    }
}

pub fn add(a: &GammaValue, b: &GammaValue) -> GammaValue {
    match (a, b) {
        (GammaValue::Finite(x), GammaValue::Finite(y)) => GammaValue::Finite(x + y),
        _ => GammaValue::Infinity,
    }
}

pub fn compare(a: &GammaValue, b: &GammaValue) -> Ordering {
    a.cmp(b)
}

impl Add for GammaValue {
    type Output = GammaValue;
    fn add(self, rhs: GammaValue) -> GammaValue {
        add(&self, &rhs)
    }
}

impl<'a> Add<&'a GammaValue> for &'a GammaValue {
    type Output = GammaValue;
    fn add(self, rhs: &'a GammaValue) -> GammaValue {
        add(self, rhs)
    }
}

impl Mul<u64> for &GammaValue {
    type Output = GammaValue;
    fn mul(self, rhs: u64) -> GammaValue {
        self.times(rhs)
    }
}

impl Sum for GammaValue {
    fn sum<I: Iterator<Item = GammaValue>>(iter: I) -> GammaValue {
        iter.fold(GammaValue::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a GammaValue> for GammaValue {
    fn sum<I: Iterator<Item = &'a GammaValue>>(iter: I) -> GammaValue {
        iter.fold(GammaValue::zero(), |acc, x| add(&acc, x))
    }
}

impl Ord for GammaValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GammaValue::Finite(x), GammaValue::Finite(y)) => x.cmp(y),
            (GammaValue::Finite(_), GammaValue::Infinity) => Ordering::Less,
            (GammaValue::Infinity, GammaValue::Finite(_)) => Ordering::Greater,
            (GammaValue::Infinity, GammaValue::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for GammaValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders as `p/q` (always with a denominator) or `inf`.
impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaValue::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            GammaValue::Infinity => f.write_str("inf"),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, GammaError> {
    let s = s.trim();
    let err = || GammaError::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl FromStr for GammaValue {
    type Err = GammaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(GammaValue::Infinity);
        }
        GammaValue::finite(parse_rational(t)?)
    }
}

impl Serialize for GammaValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GammaValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How many copies of a value occur in a [`GammaFamily`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

/// A countable family with finitely many distinct values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GammaFamily {
    terms: Vec<(GammaValue, Multiplicity)>,
}

impl GammaFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, value: GammaValue, multiplicity: Multiplicity) {
        if multiplicity != Multiplicity::Finite(0) {
            self.terms.push((value, multiplicity));
        }
    }

    pub fn with(mut self, value: GammaValue, multiplicity: Multiplicity) -> Self {
        self.push(value, multiplicity);
        self
    }

    pub fn terms(&self) -> &[(GammaValue, Multiplicity)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl FromIterator<GammaValue> for GammaFamily {
    fn from_iter<I: IntoIterator<Item = GammaValue>>(iter: I) -> Self {
        let mut family = GammaFamily::new();
        for v in iter {
            family.push(v, Multiplicity::Finite(1));
        }
        family
    }
}

/// Supremum of all finite sums drawn from the family.
pub fn family_sum(family: &GammaFamily) -> GammaValue {
    let mut total = Rational::zero();
    for (value, mult) in &family.terms {
        match (value, mult) {
            (GammaValue::Infinity, _) => return GammaValue::Infinity,
            (GammaValue::Finite(q), Multiplicity::Infinite) => {
                if q.is_positive() {
                    return GammaValue::Infinity;
                }
            }
            (GammaValue::Finite(q), Multiplicity::Finite(n)) => {
                total += q * BigInt::from(*n);
            }
        }
    }
    GammaValue::Finite(total)
}
