//! Exact edge weights.
//!
//! Weights are arbitrary-precision rationals, never floats. Every algorithm
//! in this crate (both matchers, the protocol, the checkers) must agree on
//! which of two edges is heavier, and the half-approximation bound is
//! asserted with exact arithmetic, so weight comparisons have to be
//! bit-reproducible.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::graph::GraphError;

/// A strictly positive exact edge weight.
///
/// Construct via [`EdgeWeight::from_integer`], [`EdgeWeight::from_ratio`] or
/// parsing (`"7"`, `"3/2"`). Zero and negative values are rejected.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeWeight(BigRational);

impl EdgeWeight {
    pub fn new(value: BigRational) -> Result<Self, GraphError> {
        if value.is_positive() {
            Ok(EdgeWeight(value))
        } else {
            Err(GraphError::NonPositiveWeight {
                value: value.to_string(),
            })
        }
    }

    pub fn from_integer(value: i64) -> Result<Self, GraphError> {
        Self::new(BigRational::from_integer(BigInt::from(value)))
    }

    /// Builds `numerator / denominator`; both must be positive.
    pub fn from_ratio(numerator: i64, denominator: i64) -> Result<Self, GraphError> {
        if denominator == 0 {
            return Err(GraphError::ZeroDenominator);
        }
        Self::new(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        ))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_value(self) -> BigRational {
        self.0
    }
}

impl fmt::Display for EdgeWeight {
    /// Integers print without a denominator (`7`), other rationals as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for EdgeWeight {
    type Err = GraphError;

    /// Parses `"7"` or `"3/2"`. The denominator, when present, must be a
    /// positive integer; the overall value must be positive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || GraphError::MalformedWeight {
            text: s.to_string(),
        };
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| malformed())?;
                Self::new(BigRational::from_integer(n))
            }
            Some((num, den)) => {
                let num = BigInt::from_str(num).map_err(|_| malformed())?;
                let den = BigInt::from_str(den).map_err(|_| malformed())?;
                if den.is_zero() {
                    return Err(GraphError::ZeroDenominator);
                }
                Self::new(BigRational::new(num, den))
            }
        }
    }
}
