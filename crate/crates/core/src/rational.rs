//! Positive rationals in lowest terms, used for weights and degrees.

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("rational numbers here must be positive, got {0}/{1}")]
    NotPositive(u64, u64),
    #[error("cannot parse `{0}` as a positive rational")]
    Parse(String),
}

/// A positive rational `numerator / denominator` with `gcd = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(u64, u64)", into = "(u64, u64)")]
pub struct Rational(Ratio<u64>);

impl Rational {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self, RationalError> {
        if numerator == 0 || denominator == 0 {
            return Err(RationalError::NotPositive(numerator, denominator));
        }
        Ok(Rational(Ratio::new(numerator, denominator)))
    }

    pub fn integer(n: u64) -> Result<Self, RationalError> {
        Self::new(n, 1)
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn numerator(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as a natural number, when it is one.
    pub fn as_integer(&self) -> Option<u64> {
        self.is_integer().then(|| self.numerator())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }
}

impl TryFrom<(u64, u64)> for Rational {
    type Error = RationalError;
    fn try_from((n, d): (u64, u64)) -> Result<Self, Self::Error> {
        Rational::new(n, d)
    }
}

impl From<Rational> for (u64, u64) {
    fn from(r: Rational) -> Self {
        (r.numerator(), r.denominator())
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl FromStr for Rational {
    type Err = RationalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RationalError::Parse(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: u64 = n.parse().map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        Rational::new(n, d).map_err(|_| bad())
    }
}
