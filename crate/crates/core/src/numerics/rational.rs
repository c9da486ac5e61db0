//! Exact rational arithmetic.
//!
//! Every probability, payoff and LP coefficient in this crate is a
//! [`Rational`]: an arbitrary-precision fraction that is always kept
//! normalized (positive denominator, gcd 1). Equality is therefore exact
//! value equality, and equilibrium checks reduce to `==`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numerics::NumericsError;

/// An exact fraction with arbitrary-precision numerator and denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Builds `num / den`. Panics if `den == 0`; use [`Rational::from_str`]
    /// for fallible construction from untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, NumericsError> {
        if den.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
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

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other { self } else { other }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other { self } else { other }
    }

    /// True iff the value lies in the closed unit interval.
    pub fn is_probability(&self) -> bool {
        !self.is_negative() && self.0 <= BigRational::one()
    }

    /// Decimal rendering with `digits` places after the point, rounded
    /// half away from zero. Exact long division, no float involved.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let sign = if self.0.is_negative() { "-" } else { "" };
        let num = self.0.numer().magnitude().clone();
        let den = self.0.denom().magnitude().clone();
        let scale = BigUint::from(10u32).pow(digits as u32);
        // round(num*scale/den) half away from zero
        let scaled = &num * &scale;
        let (q, r) = num_integer::Integer::div_rem(&scaled, &den);
        let q = if &r * 2u32 >= den { q + 1u32 } else { q };
        let digits_str = q.to_string();
        if digits == 0 {
            return format!("{sign}{digits_str}");
        }
        let padded = format!("{:0>width$}", digits_str, width = digits + 1);
        let split = padded.len() - digits;
        format!("{sign}{}.{}", &padded[..split], &padded[split..])
    }

    /// Approximate `f64` value; rendering and diagnostics only, never used
    /// in comparisons.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Parses `"a/b"`, an integer literal, or a decimal literal, exactly.
///
/// Decimals convert without rounding: `0.0137` becomes `137/10000`.
pub fn rational_parse(text: &str) -> Result<Rational, NumericsError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(NumericsError::MalformedRational(text.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| NumericsError::MalformedRational(text.to_string()))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| NumericsError::MalformedRational(text.to_string()))?;
        return Rational::from_big(num, den);
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
        if frac_part.is_empty()
            || !int_digits.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(NumericsError::MalformedRational(text.to_string()));
        }
        let whole: BigInt = int_digits
            .parse()
            .map_err(|_| NumericsError::MalformedRational(text.to_string()))?;
        let frac: BigInt = frac_part
            .parse()
            .map_err(|_| NumericsError::MalformedRational(text.to_string()))?;
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        let num = (whole * &scale + frac) * BigInt::from(sign);
        return Rational::from_big(num, scale);
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| NumericsError::MalformedRational(text.to_string()))?;
    Ok(Rational(BigRational::from_integer(n)))
}

impl FromStr for Rational {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        rational_parse(s)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Shorthand used pervasively in tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}
