//! Exact nonnegative rationals in lowest terms.

use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Mul};
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A nonnegative rational number kept in canonical form.
///
/// The numerator and denominator are always coprime, the denominator is at
/// least one, and zero is stored as `0/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PosRational(Ratio<BigUint>);

impl PosRational {
    /// Reduces `numer / denom`.
    pub fn new(numer: BigUint, denom: BigUint) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(PosRational(Ratio::new(numer, denom)))
    }

    pub fn from_u64s(numer: u64, denom: u64) -> Result<Self> {
        Self::new(BigUint::from(numer), BigUint::from(denom))
    }

    pub fn integer(n: u64) -> Self {
        PosRational(Ratio::from_integer(BigUint::from(n)))
    }

    pub fn from_biguint(n: BigUint) -> Self {
        PosRational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        PosRational(Ratio::zero())
    }

    pub fn one() -> Self {
        PosRational(Ratio::one())
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    /// `(n(r), d(r))`, undefined at zero.
    pub fn num_den(&self) -> Result<(BigUint, BigUint)> {
        if self.is_zero() {
            return Err(Error::ZeroRational);
        }
        Ok((self.numer().clone(), self.denom().clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.numer().is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.denom().is_one()
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if other > self {
            None
        } else {
            Some(PosRational(&self.0 - &other.0))
        }
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(PosRational(&self.0 / &other.0))
        }
    }

    pub fn mul_int(&self, k: u64) -> Self {
        PosRational(&self.0 * BigUint::from(k))
    }

    /// `floor(self)`.
    pub fn floor(&self) -> BigUint {
        self.numer() / self.denom()
    }

    /// Least positive rational that is an integer multiple of both inputs.
    ///
    /// Both arguments must be nonzero.
    pub fn common_multiple(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroRational);
        }
        Self::new(self.numer().lcm(other.numer()), self.denom().gcd(other.denom()))
    }

    /// Whether `self = k * step` for some nonnegative integer `k`.
    pub fn is_multiple_of(&self, step: &Self) -> bool {
        match self.checked_div(step) {
            Some(q) => q.is_integer(),
            None => self.is_zero(),
        }
    }

    /// Approximate value for human-facing output.
    pub fn to_f64(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = self.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    }
}

impl Add for PosRational {
    type Output = PosRational;
    fn add(self, rhs: PosRational) -> PosRational {
        PosRational(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a PosRational> for &'a PosRational {
    type Output = PosRational;
    fn add(self, rhs: &PosRational) -> PosRational {
        PosRational(&self.0 + &rhs.0)
    }
}

impl Mul for PosRational {
    type Output = PosRational;
    fn mul(self, rhs: PosRational) -> PosRational {
        PosRational(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a PosRational> for &'a PosRational {
    type Output = PosRational;
    fn mul(self, rhs: &PosRational) -> PosRational {
        PosRational(&self.0 * &rhs.0)
    }
}

impl core::iter::Sum for PosRational {
    fn sum<I: Iterator<Item = PosRational>>(iter: I) -> Self {
        iter.fold(PosRational::zero(), |acc, x| acc + x)
    }
}

/// Prints `a/b`, or `a` when the denominator is one.
impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

fn parse_digits(s: &str) -> Option<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigUint::parse_bytes(s.as_bytes(), 10)
}

/// Accepts `a/b` or `a` with ASCII digits only.
impl FromStr for PosRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadRational(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n = parse_digits(n).ok_or_else(bad)?;
                let d = parse_digits(d).ok_or_else(bad)?;
                PosRational::new(n, d)
            }
            None => Ok(PosRational::from_biguint(parse_digits(s).ok_or_else(bad)?)),
        }
    }
}

/// A rational or positive infinity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtRational {
    Finite(PosRational),
    Infinite,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&PosRational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinite => None,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => r.fmt(f),
            ExtRational::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            Ok(ExtRational::Infinite)
        } else {
            s.parse().map(ExtRational::Finite)
        }
    }
}
