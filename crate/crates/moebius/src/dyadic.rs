//! Exact dyadic rationals `num / 2^exp` and angles on the circle `R mod 2`.
//!
//! Every coordinate in the crate is measured in units of pi, so the circle has
//! circumference 2.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A reduced dyadic rational. Either `num` is odd or `exp == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Dyadic {
        let mut num = num.into();
        let mut exp = exp;
        if num.is_zero() {
            return Dyadic::zero();
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp as u64) as u32;
        if tz > 0 {
            num >>= tz;
            exp -= tz;
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn int(n: i64) -> Dyadic {
        Dyadic::new(n, 0)
    }

    /// `1 / 2^e`.
    pub fn unit(e: u32) -> Dyadic {
        Dyadic::new(1, e)
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn half(&self) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(self.num.clone(), self.exp + 1)
    }

    /// Multiplication by `2^k`.
    pub fn shl(&self, k: u32) -> Dyadic {
        if k >= self.exp {
            Dyadic::new(&self.num << (k - self.exp), 0)
        } else {
            Dyadic::new(self.num.clone(), self.exp - k)
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.num * k, self.exp)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &other.num, self.exp + other.exp)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&(BigInt::one() << self.exp))
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    /// True when the value is an integer multiple of `1/2^e`.
    pub fn is_multiple_of_unit(&self, e: u32) -> bool {
        self.exp <= e
    }

    /// The value times `2^e` as an integer, if it is one.
    pub fn scaled_int(&self, e: u32) -> Option<BigInt> {
        if self.exp <= e {
            Some(&self.num << (e - self.exp))
        } else {
            None
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << self.exp)
    }

    /// Exact decimal expansion, e.g. `-0.375`. Always terminates.
    pub fn to_decimal(&self) -> String {
        if self.exp == 0 {
            return self.num.to_string();
        }
        let scaled = self.num.abs() * BigInt::from(5).pow(self.exp);
        let digits = scaled.to_string();
        let e = self.exp as usize;
        let padded = if digits.len() <= e {
            format!("{}{}", "0".repeat(e + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int_part, frac) = padded.split_at(padded.len() - e);
        let frac = frac.trim_end_matches('0');
        let sign = if self.num.is_negative() { "-" } else { "" };
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }

    /// The value as an `i64` numerator over `2^e`, for small display work.
    pub fn to_i64_scaled(&self, e: u32) -> Option<i64> {
        self.scaled_int(e).and_then(|n| n.to_i64())
    }

    /// The unique `self + 2k` lying in `[lo, lo + 2)`.
    pub fn lift_into_window(&self, lo: &Dyadic) -> Dyadic {
        let two = Dyadic::int(2);
        let k = ((lo - self).half()).ceil();
        let out = self + &two.mul_int(&k);
        debug_assert!(&out >= lo && out < lo + &two);
        out
    }

    pub fn max_exp<'a>(items: impl IntoIterator<Item = &'a Dyadic>) -> u32 {
        items.into_iter().map(|d| d.exp).max().unwrap_or(0)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        Dyadic::new(
            (&self.num << (e - self.exp)) + (&rhs.num << (e - rhs.exp)),
            e,
        )
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        Dyadic::new(
            (&self.num << (e - self.exp)) - (&rhs.num << (e - rhs.exp)),
            e,
        )
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Add<&Dyadic> for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        &self + rhs
    }
}

impl Sub<&Dyadic> for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        &self - rhs
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Dyadic {
        Dyadic::int(n)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `p`, `p/q` with `q` a power of two, or `p/2^k`.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic, Error> {
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            None => (t, None),
            Some((n, d)) => (n.trim(), Some(d.trim())),
        };
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let exp = match d {
            None => 0,
            Some(d) => {
                if let Some(k) = d.strip_prefix("2^") {
                    k.trim().parse::<u32>().map_err(|_| bad())?
                } else {
                    let den: BigInt = d.parse().map_err(|_| bad())?;
                    if !den.is_positive() || (&den & (&den - 1u32)) != BigInt::zero() {
                        return Err(bad());
                    }
                    den.trailing_zeros().unwrap_or(0) as u32
                }
            }
        };
        Ok(Dyadic::new(num, exp))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Dyadic, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of `R mod 2`, stored as its representative in `[0, 2)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CircleAngle(Dyadic);

impl CircleAngle {
    pub fn new(v: &Dyadic) -> CircleAngle {
        CircleAngle(v.lift_into_window(&Dyadic::zero()))
    }

    pub fn value(&self) -> &Dyadic {
        &self.0
    }

    pub fn lift_into_window(&self, lo: &Dyadic) -> Dyadic {
        self.0.lift_into_window(lo)
    }

    /// Counterclockwise distance from `self` to `other`, in `[0, 2)`.
    pub fn ccw_to(&self, other: &CircleAngle) -> Dyadic {
        (&other.0 - &self.0).lift_into_window(&Dyadic::zero())
    }
}

impl fmt::Display for CircleAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_spot_values() {
        assert_eq!(&d("1/8") + &d("1/4"), d("3/8"));
        assert_eq!(Dyadic::int(1).half(), d("1/2"));
        assert_eq!(d("-3/4").cmp(&d("-5/8")), Ordering::Less);
        assert_eq!(&d("3/4") - &d("3/4"), Dyadic::zero());
    }

    #[test]
    fn reduced_form() {
        let x = Dyadic::new(12, 5);
        assert_eq!(x.num(), &BigInt::from(3));
        assert_eq!(x.exp(), 3);
        assert_eq!(Dyadic::new(8, 2), Dyadic::int(2));
        assert_eq!(Dyadic::new(0, 7).exp(), 0);
    }

    #[test]
    fn lifts() {
        assert_eq!(d("3/2").lift_into_window(&d("-1")), d("-1/2"));
        assert_eq!(
            Dyadic::zero().lift_into_window(&Dyadic::zero()),
            Dyadic::zero()
        );
        assert_eq!(d("1/8").lift_into_window(&d("2")), d("17/8"));
        assert_eq!(d("2").lift_into_window(&d("0")), d("0"));
    }

    #[test]
    fn text_forms() {
        assert_eq!(d("3/8").to_string(), "3/8");
        assert_eq!(d("6/8").to_string(), "3/4");
        assert_eq!(d("5/2^3").to_string(), "5/8");
        assert_eq!(d("4/2").to_string(), "2");
        assert_eq!(d("-7/16").to_string(), "-7/16");
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
        assert_eq!(d("-3/8").to_decimal(), "-0.375");
        assert_eq!(d("17/4").to_decimal(), "4.25");
        assert_eq!(d("200").to_decimal(), "200");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d("-1/2").floor(), BigInt::from(-1));
        assert_eq!(d("-1/2").ceil(), BigInt::from(0));
        assert_eq!(d("5/4").floor(), BigInt::from(1));
        assert_eq!(d("3").ceil(), BigInt::from(3));
    }

    #[test]
    fn circle_angles() {
        assert_eq!(CircleAngle::new(&d("-1/4")).value(), &d("7/4"));
        assert_eq!(CircleAngle::new(&d("5/2")).value(), &d("1/2"));
        let a = CircleAngle::new(&d("3/2"));
        let b = CircleAngle::new(&d("0"));
        assert_eq!(a.ccw_to(&b), d("1/2"));
    }
}
