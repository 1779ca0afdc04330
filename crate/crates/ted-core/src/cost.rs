//! Exact matching costs: unbounded signed integers plus a formal +infinity.

use num_bigint::BigInt;
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg};
use std::str::FromStr;

/// An exact cost value.
///
/// `Infinity` marks a forbidden pair. It absorbs addition and compares greater
/// than every finite value, so minimization never selects a forbidden pair
/// when a finite alternative exists. Finite values are arbitrary-precision:
/// the reductions build costs up to the eighth power of their scale constant,
/// which overflows any fixed-width type.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Cost {
    Finite(BigInt),
    Infinity,
}

impl Cost {
    pub fn zero() -> Self {
        Cost::Finite(BigInt::zero())
    }

    pub fn finite<T: Into<BigInt>>(v: T) -> Self {
        Cost::Finite(v.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cost::Infinity)
    }

    pub fn as_finite(&self) -> Option<&BigInt> {
        match self {
            Cost::Finite(v) => Some(v),
            Cost::Infinity => None,
        }
    }

    /// Finite payload, panicking on infinity. For contexts where infinity is
    /// ruled out by construction.
    pub fn expect_finite(&self) -> &BigInt {
        self.as_finite().expect("unexpected infinite cost")
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Infinity, Cost::Infinity) => Ordering::Equal,
            (Cost::Infinity, Cost::Finite(_)) => Ordering::Greater,
            (Cost::Finite(_), Cost::Infinity) => Ordering::Less,
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add<&Cost> for &Cost {
    type Output = Cost;
    fn add(self, rhs: &Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinity,
        }
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        &self + &rhs
    }
}

impl Neg for Cost {
    type Output = Cost;
    fn neg(self) -> Cost {
        match self {
            Cost::Finite(v) => Cost::Finite(-v),
            Cost::Infinity => Cost::Infinity,
        }
    }
}

impl<'a> Sum<&'a Cost> for Cost {
    fn sum<I: Iterator<Item = &'a Cost>>(iter: I) -> Cost {
        let mut acc = Cost::zero();
        for c in iter {
            acc = &acc + c;
        }
        acc
    }
}

impl From<i64> for Cost {
    fn from(v: i64) -> Self {
        Cost::Finite(BigInt::from(v))
    }
}

impl From<BigInt> for Cost {
    fn from(v: BigInt) -> Self {
        Cost::Finite(v)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinity => write!(f, "inf"),
        }
    }
}

/// Error parsing a cost literal.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid cost literal `{0}`")]
pub struct ParseCostError(pub String);

impl FromStr for Cost {
    type Err = ParseCostError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Cost::Infinity);
        }
        BigInt::from_str(s)
            .map(Cost::Finite)
            .map_err(|_| ParseCostError(s.to_owned()))
    }
}
