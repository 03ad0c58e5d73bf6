//! Extended integers used for edge weights, potentials and energy values.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// An integer extended with both infinities.
///
/// The derived ordering is the natural one: `NegInf < Finite(_) < Inf`.
/// Arithmetic is checked; infinities absorb finite operands and
/// `Inf + NegInf` is rejected rather than given a meaning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    NegInf,
    Finite(i64),
    Inf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("integer overflow")]
    Overflow,
    #[error("sum of +inf and -inf is undefined")]
    Indeterminate,
}

impl Weight {
    pub const ZERO: Weight = Weight::Finite(0);

    pub fn finite(self) -> Option<i64> {
        match self {
            Weight::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    /// Strictly below zero (including `-inf`).
    pub fn is_negative(self) -> bool {
        match self {
            Weight::NegInf => true,
            Weight::Finite(x) => x < 0,
            Weight::Inf => false,
        }
    }

    /// Strictly above zero (including `+inf`).
    pub fn is_positive(self) -> bool {
        match self {
            Weight::NegInf => false,
            Weight::Finite(x) => x > 0,
            Weight::Inf => true,
        }
    }

    pub fn checked_add(self, rhs: Weight) -> Result<Weight, WeightError> {
        use Weight::*;
        match (self, rhs) {
            (Inf, NegInf) | (NegInf, Inf) => Err(WeightError::Indeterminate),
            (Inf, _) | (_, Inf) => Ok(Inf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => a.checked_add(b).map(Finite).ok_or(WeightError::Overflow),
        }
    }

    pub fn checked_sub(self, rhs: Weight) -> Result<Weight, WeightError> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_neg(self) -> Result<Weight, WeightError> {
        match self {
            Weight::Inf => Ok(Weight::NegInf),
            Weight::NegInf => Ok(Weight::Inf),
            Weight::Finite(x) => x.checked_neg().map(Weight::Finite).ok_or(WeightError::Overflow),
        }
    }

    /// Multiply a finite weight by a non-negative factor; infinities are kept.
    pub fn checked_scale(self, factor: i64) -> Result<Weight, WeightError> {
        match self {
            Weight::Finite(x) => x.checked_mul(factor).map(Weight::Finite).ok_or(WeightError::Overflow),
            other => Ok(other),
        }
    }
}

impl From<i64> for Weight {
    fn from(x: i64) -> Self {
        Weight::Finite(x)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::NegInf => f.write_str("-inf"),
            Weight::Finite(x) => write!(f, "{x}"),
            Weight::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid weight token {0:?}")]
pub struct ParseWeightError(pub String);

impl FromStr for Weight {
    type Err = ParseWeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "+inf" => Ok(Weight::Inf),
            "-inf" => Ok(Weight::NegInf),
            _ => s.parse::<i64>().map(Weight::Finite).map_err(|_| ParseWeightError(s.to_string())),
        }
    }
}

/// Finite weights serialize as JSON numbers, infinities as `"inf"` / `"-inf"`.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Weight::Finite(x) => serializer.serialize_i64(*x),
            Weight::Inf => serializer.serialize_str("inf"),
            Weight::NegInf => serializer.serialize_str("-inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_places_infinities_at_the_ends() {
        assert!(Weight::NegInf < Weight::Finite(i64::MIN));
        assert!(Weight::Finite(i64::MAX) < Weight::Inf);
        assert!(Weight::Finite(-1) < Weight::ZERO);
    }

    #[test]
    fn infinity_absorbs_and_overflow_is_reported() {
        assert_eq!(Weight::Inf.checked_add(Weight::Finite(-7)), Ok(Weight::Inf));
        assert_eq!(Weight::Finite(3).checked_add(Weight::NegInf), Ok(Weight::NegInf));
        assert_eq!(Weight::Inf.checked_add(Weight::NegInf), Err(WeightError::Indeterminate));
        assert_eq!(
            Weight::Finite(i64::MAX).checked_add(Weight::Finite(1)),
            Err(WeightError::Overflow)
        );
        assert_eq!(Weight::Finite(i64::MIN).checked_neg(), Err(WeightError::Overflow));
    }

    #[test]
    fn parse_and_display_agree() {
        for token in ["0", "-3", "17", "inf", "-inf"] {
            let w: Weight = token.parse().unwrap();
            assert_eq!(w.to_string(), token);
        }
        assert!("infinity".parse::<Weight>().is_err());
        assert!("1.5".parse::<Weight>().is_err());
    }
}
