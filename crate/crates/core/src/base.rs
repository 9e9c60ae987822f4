use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A numeral base `b >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Base(u32);

impl Base {
    pub const BINARY: Base = Base(2);
    pub const TERNARY: Base = Base(3);

    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b as u64));
        }
        Ok(Base(b))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    /// `[(b+1)/2]`, the optimal constant of the second-difference bound.
    #[inline]
    pub fn half_ceil(self) -> u32 {
        self.0.div_ceil(2)
    }
}

impl TryFrom<u32> for Base {
    type Error = Error;

    fn try_from(b: u32) -> Result<Self> {
        Base::new(b)
    }
}

impl From<Base> for u32 {
    fn from(b: Base) -> u32 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let b: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Constraint(format!("base `{s}` is not an integer")))?;
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        let b = u32::try_from(b).map_err(|_| Error::Constraint(format!("base {b} is too large")))?;
        Ok(Base(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_bases() {
        assert_eq!(Base::new(0), Err(Error::InvalidBase(0)));
        assert_eq!(Base::new(1), Err(Error::InvalidBase(1)));
        assert!(Base::new(2).is_ok());
        assert!("1".parse::<Base>().is_err());
        assert!("x".parse::<Base>().is_err());
        assert_eq!("10".parse::<Base>().unwrap().get(), 10);
    }

    #[test]
    fn half_ceil_matches_floor_formula() {
        for b in 2..20 {
            assert_eq!(Base::new(b).unwrap().half_ceil(), b.div_ceil(2));
        }
    }
}
