//! Exact rational arithmetic.
//!
//! Every numeric quantity in this crate (types, costs, taxes, utilities,
//! welfare) is a [`Rat`]: an arbitrary-precision rational kept in lowest
//! terms with a positive denominator. There is no floating point and no
//! rounding anywhere; comparisons such as "does the announced sum equal
//! the cost exactly" are decided exactly, which the strategy definitions
//! rely on.
//!
//! Rationals serialize as `"p/q"` strings (just `"p"` when the denominator
//! is 1) in every file format. Parsing additionally accepts decimal
//! literals (`"0.5"` becomes `1/2`, exactly).

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact rational number, normalized (gcd of numerator and denominator
/// is 1, denominator strictly positive).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::InvalidRational("denominator is zero".into()));
        }
        Ok(Rat(BigRational::new(
            BigInt::from(numer),
            BigInt::from(denom),
        )))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Exact midpoint of two rationals.
    pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
        (a + b) / Rat::from_int(2)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `"p/q"`, plain integers, and exact decimals (`"1.25"` is
    /// parsed as `5/4`, not converted through floating point).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidRational("empty string".into()));
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidRational(s.into()))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::InvalidRational(s.into()))?;
            if d.is_zero() {
                return Err(Error::InvalidRational(format!("{s}: denominator is zero")));
            }
            return Ok(Rat(BigRational::new(n, d)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int = if int.is_empty() || int == "-" {
                format!("{int}0")
            } else {
                int.to_string()
            };
            let whole: BigInt = int.parse().map_err(|_| Error::InvalidRational(s.into()))?;
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::InvalidRational(s.into()));
            }
            let digits: BigInt = frac.parse().map_err(|_| Error::InvalidRational(s.into()))?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_part = BigRational::new(digits, scale);
            let whole_part = BigRational::from_integer(whole);
            let value = if s.starts_with('-') {
                whole_part - frac_part
            } else {
                whole_part + frac_part
            };
            return Ok(Rat(value));
        }
        let n: BigInt = s.parse().map_err(|_| Error::InvalidRational(s.into()))?;
        Ok(Rat(BigRational::from_integer(n)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// Shorthand used pervasively in tests: `rat("110")`, `rat("1/3")`.
pub fn rat(s: &str) -> Rat {
    s.parse().expect("literal rational")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(rat("110"), Rat::from_int(110));
        assert_eq!(rat("-4"), Rat::from_int(-4));
        assert_eq!(rat("6/4"), Rat::new(3, 2).unwrap());
        assert_eq!(rat("-6/4"), Rat::new(-3, 2).unwrap());
        assert_eq!(rat("0.5"), Rat::new(1, 2).unwrap());
        assert_eq!(rat("1.25"), Rat::new(5, 4).unwrap());
        assert_eq!(rat("-0.5"), Rat::new(-1, 2).unwrap());
        assert_eq!(rat(" 3 "), Rat::from_int(3));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "1/0", "a", "1.2.3", "1/ b", "--3", "1.x"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn displays_without_denominator_one() {
        assert_eq!(rat("4/2").to_string(), "2");
        assert_eq!(rat("3/2").to_string(), "3/2");
        assert_eq!(rat("-10").to_string(), "-10");
    }

    #[test]
    fn midpoint_is_exact() {
        assert_eq!(Rat::midpoint(&rat("1/3"), &rat("1/2")), rat("5/12"));
    }

    proptest! {
        #[test]
        fn normalized_form(n in -1000i64..1000, d in 1i64..1000) {
            let r = Rat::new(n, d).unwrap();
            prop_assert!(r.denom().is_positive());
            prop_assert!(num_integer::gcd(r.numer().clone(), r.denom().clone()).abs()
                == num_bigint::BigInt::from(1i64)
                || r.numer().is_zero() && r.denom() == &num_bigint::BigInt::from(1i64));
        }

        #[test]
        fn display_parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rat::new(n, d).unwrap();
            let back: Rat = r.to_string().parse().unwrap();
            prop_assert_eq!(r, back);
        }

        #[test]
        fn arithmetic_is_exact(a in -100i64..100, b in 1i64..100, c in -100i64..100, d in 1i64..100) {
            let x = Rat::new(a, b).unwrap();
            let y = Rat::new(c, d).unwrap();
            // a/b + c/d == (ad + cb) / bd, exactly
            let expect = Rat::new(a * d + c * b, b * d).unwrap();
            prop_assert_eq!(&x + &y, expect);
            prop_assert_eq!(&x + &y - &y, x);
        }
    }
}
