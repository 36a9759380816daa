//! Exact half-integer quantum numbers stored as doubled integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::{invalid, Error};

/// A value `j` in `{…, -1, -1/2, 0, 1/2, 1, …}` stored as `2j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn integer(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// `2j + 1`, the multiplicity of a level with angular momentum `j`.
    pub const fn multiplicity(self) -> i32 {
        self.0 + 1
    }

    /// The integer value when `self` is integral.
    pub fn as_integer(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// `true` when `self` and `other` differ by an integer.
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }

    /// Projections `-j, -j+1, …, j`.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + Clone {
        let j = self.0;
        (0..j.max(-1) + 1).map(move |k| HalfInt(2 * k - j))
    }

    /// Values `lo, lo+1, …, hi` (empty when `hi < lo`).
    pub fn range_inclusive(lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> + Clone {
        (lo.0..=hi.0).step_by(2).map(HalfInt)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i32> for HalfInt {
    fn from(n: i32) -> Self {
        HalfInt::integer(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `3`, `-2`, `7/2`, `-1/2`, `3.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad half-integer `{s}`")))?;
            return match den.trim() {
                "2" => Ok(HalfInt(num)),
                "1" => Ok(HalfInt::integer(num)),
                _ => Err(invalid(format!("bad half-integer `{s}`"))),
            };
        }
        let x: f64 = s
            .parse()
            .map_err(|_| invalid(format!("bad half-integer `{s}`")))?;
        let twice = (2.0 * x).round();
        if (2.0 * x - twice).abs() > 1e-9 || twice.abs() > f64::from(i32::MAX) {
            return Err(invalid(format!("`{s}` is not a multiple of 1/2")));
        }
        Ok(HalfInt(twice as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!("7/2".parse::<HalfInt>().unwrap(), HalfInt::from_twice(7));
        assert_eq!("-3".parse::<HalfInt>().unwrap(), HalfInt::integer(-3));
        assert_eq!("1.5".parse::<HalfInt>().unwrap(), HalfInt::from_twice(3));
        assert!("0.3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_twice(-5).to_string(), "-5/2");
        assert_eq!(HalfInt::integer(4).to_string(), "4");
    }

    #[test]
    fn projections_cover_multiplet() {
        let m: Vec<_> = HalfInt::from_twice(3).projections().collect();
        assert_eq!(m.len(), 4);
        assert_eq!(m[0], HalfInt::from_twice(-3));
        assert_eq!(m[3], HalfInt::from_twice(3));
    }
}
