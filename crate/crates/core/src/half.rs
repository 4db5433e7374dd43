//! Exact half-integers. Word distances are integers, so four-point
//! defects and every δ-derived bound live in (1/2)·Z; storing twice the
//! value keeps all comparisons in integer arithmetic.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Sub};

/// A rational with denominator 1 or 2, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    /// Builds n/2 from the numerator over a fixed denominator of 2.
    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Smallest integer ≥ the value.
    pub fn ceil_int(self) -> i64 {
        if self.twice >= 0 {
            (self.twice + 1) / 2
        } else {
            -((-self.twice) / 2)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_ceil() {
        assert_eq!(HalfInt::from_int(3).to_string(), "3");
        assert_eq!(HalfInt::from_twice(7).to_string(), "7/2");
        assert_eq!(HalfInt::from_twice(7).ceil_int(), 4);
        assert_eq!(HalfInt::from_twice(6).ceil_int(), 3);
        assert_eq!(HalfInt::from_twice(-1).ceil_int(), 0);
    }

    #[test]
    fn ordering_is_by_value() {
        assert!(HalfInt::from_twice(3) < HalfInt::from_int(2));
        assert!(HalfInt::from_int(1) < HalfInt::from_twice(3));
    }
}
