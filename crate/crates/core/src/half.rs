//! Half-integers, used for mode indices and conformal levels.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use crate::rational::Rat;

/// A number in `(1/2)Z`, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);
    pub const HALF: Half = Half(1);
    pub const ONE: Half = Half(2);

    pub const fn from_twice(t: i64) -> Half {
        Half(t)
    }

    pub const fn int(n: i64) -> Half {
        Half(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer value; panics on a proper half-integer.
    pub fn to_int(self) -> i64 {
        assert!(self.is_integer(), "{self} is not an integer");
        self.0 / 2
    }

    /// Largest integer not exceeding the value.
    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    pub fn ceil(self) -> i64 {
        -((-self.0).div_euclid(2))
    }

    pub fn abs(self) -> Half {
        Half(self.0.abs())
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(self.0, 2)
    }

    /// Converts an exact rational in `(1/2)Z` to a half-integer.
    pub fn from_rat(r: &Rat) -> Option<Half> {
        let t = r * &Rat::from_int(2);
        t.to_i64().map(Half)
    }

    /// Serialized form `"n/2"` with `n` twice the value.
    pub fn to_serial(self) -> String {
        format!("{}/2", self.0)
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half(self.0 + rhs.0)
    }
}

impl AddAssign for Half {
    fn add_assign(&mut self, rhs: Half) {
        self.0 += rhs.0;
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half(self.0 - rhs.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Half {
    type Err = String;

    /// Accepts `n`, `n/2` and anything else that reduces to a half-integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: Rat = s.parse().map_err(|e: crate::rational::ParseRatError| e.to_string())?;
        Half::from_rat(&r).ok_or_else(|| format!("`{s}` is not a half-integer"))
    }
}

impl serde::Serialize for Half {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_serial())
    }
}

impl<'de> serde::Deserialize<'de> for Half {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_ceil_and_parse() {
        let h: Half = "-3/2".parse().unwrap();
        assert_eq!(h, Half::from_twice(-3));
        assert_eq!(h.floor(), -2);
        assert_eq!(h.ceil(), -1);
        assert_eq!("4/2".parse::<Half>().unwrap(), Half::int(2));
        assert!("1/3".parse::<Half>().is_err());
        assert_eq!(h.to_serial(), "-3/2");
        assert_eq!(Half::int(1).to_serial(), "2/2");
    }
}
