//! Arbitrary-precision rational scalar.
//!
//! Canonical form is maintained by the backing `BigRational`: reduced to lowest
//! terms with a positive denominator. The newtype owns the textual contract used
//! across the crate: rationals parse from and render to `"p/q"` (plain `"p"` when
//! the denominator is 1), and decimal output is produced by exact integer
//! arithmetic, never through floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    /// `p/q` from machine integers; panics on `q == 0` (test/internal helper).
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.pow(e)))
    }

    /// Exact checked division.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn floor_bigint(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Parses a plain decimal literal such as `-36.47`, `0.5e-3` or `21` into
    /// the exact rational it denotes.
    pub fn from_decimal_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (mantissa, exp10) = match t.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = t[i + 1..]
                    .parse()
                    .map_err(|_| Error::ParseRational(s.to_string()))?;
                (&t[..i], e)
            }
            None => (t, 0),
        };
        let (sign, body) = match mantissa.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::ParseRational(s.to_string()));
        }
        let digits: String = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::ParseRational(s.to_string()));
        }
        let num: BigInt = digits.parse().unwrap_or_else(|_| BigInt::zero());
        let scale = frac_part.len() as i64 - exp10;
        let mut r = Rational(BigRational::from_integer(num * sign));
        let ten = Rational::from_int(10);
        if scale > 0 {
            r = &r / &ten.pow(scale as i32)?;
        } else if scale < 0 {
            r = &r * &ten.pow((-scale) as i32)?;
        }
        Ok(r)
    }

    /// Renders the value as a decimal string with `sig` significant digits,
    /// round-half-even, computed entirely in integer arithmetic.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();
        // e with 10^e <= |x| < 10^(e+1)
        let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
        let pow10 = |k: i64| -> BigInt { BigInt::from(10u32).pow(k.unsigned_abs() as u32) };
        loop {
            // compare |x| against 10^e
            let (lhs, rhs) = if e >= 0 {
                (num.clone(), &den * pow10(e))
            } else {
                (&num * pow10(-e), den.clone())
            };
            match lhs.cmp(&rhs) {
                Ordering::Less => e -= 1,
                _ => {
                    // check |x| < 10^(e+1)
                    let (lhs2, rhs2) = if e + 1 >= 0 {
                        (num.clone(), &den * pow10(e + 1))
                    } else {
                        (&num * pow10(-(e + 1)), den.clone())
                    };
                    if lhs2 < rhs2 {
                        break;
                    }
                    e += 1;
                }
            }
        }
        // m = round(|x| * 10^(sig-1-e)), half to even
        let shift = sig as i64 - 1 - e;
        let (scaled_num, scaled_den) = if shift >= 0 {
            (&num * pow10(shift), den.clone())
        } else {
            (num.clone(), &den * pow10(-shift))
        };
        let (q, r) = scaled_num.div_rem(&scaled_den);
        let twice: BigInt = &r * 2;
        let mut m = match twice.cmp(&scaled_den) {
            Ordering::Less => q,
            Ordering::Greater => q + 1,
            Ordering::Equal => {
                if q.is_even() {
                    q
                } else {
                    q + 1
                }
            }
        };
        let cap = pow10(sig as i64);
        if m == cap {
            m /= 10;
            e += 1;
        }
        let digits = m.to_string();
        debug_assert_eq!(digits.len(), sig);
        let body = if e >= sig as i64 {
            // integer with padding zeros
            let mut s = digits;
            s.push_str(&"0".repeat((e + 1 - sig as i64) as usize));
            s
        } else if e >= 0 {
            let split = (e + 1) as usize;
            let int = &digits[..split];
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                int.to_string()
            } else {
                format!("{int}.{frac}")
            }
        } else {
            let frac = format!("{}{}", "0".repeat((-e - 1) as usize), digits);
            let frac = frac.trim_end_matches('0');
            format!("0.{frac}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Floor of `sqrt(self)` to `k` decimal digits: the result `s` satisfies
    /// `0 <= sqrt(self) - s <= 10^-k`. Errors on negative input.
    pub fn sqrt_floor(&self, k: u32) -> Result<Rational> {
        if self.is_negative() {
            return Err(Error::InvalidParameter("sqrt of negative value".into()));
        }
        let scale = BigInt::from(10u32).pow(k);
        // sqrt(n/d) = sqrt(n*d)/d; floor(sqrt(n*d*10^2k)) / (d*10^k)
        let inner = self.numer() * self.denom() * &scale * &scale;
        let root = inner.sqrt();
        Rational::new(root, self.denom() * &scale)
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::ParseRational(s.to_string()));
        }
        let parse_int = |x: &str| -> Result<BigInt> {
            let x = x.trim();
            if x.is_empty() {
                return Err(Error::ParseRational(s.to_string()));
            }
            x.parse::<BigInt>()
                .map_err(|_| Error::ParseRational(s.to_string()))
        };
        match t.split_once('/') {
            Some((p, q)) => {
                let num = parse_int(p)?;
                let den = parse_int(q)?;
                Rational::new(num, den)
            }
            None => Ok(Rational::from_bigint(parse_int(t)?)),
        }
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

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        (&self).div(&rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
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

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

/// Sign of a big integer as -1, 0, 1.
pub fn bigint_sign(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_roundtrip() {
        assert_eq!(r("3/4").to_string(), "3/4");
        assert_eq!(r("-6/8").to_string(), "-3/4");
        assert_eq!(r("7").to_string(), "7");
        assert_eq!(r("7/1").to_string(), "7");
        assert_eq!(r("0/5").to_string(), "0");
        assert_eq!(r("2/-4").to_string(), "-1/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!("1/0".parse::<Rational>(), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn garbage_rejected() {
        assert!("".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a = r("1/3");
        let b = r("1/6");
        assert_eq!(&a + &b, r("1/2"));
        assert_eq!(&a - &b, r("1/6"));
        assert_eq!(&a * &b, r("1/18"));
        assert_eq!(&a / &b, r("2"));
        assert_eq!(-&a, r("-1/3"));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(r("1/2").to_decimal(12), "0.5");
        assert_eq!(r("2/3").to_decimal(6), "0.666667");
        assert_eq!(r("-1/8").to_decimal(3), "-0.125");
        assert_eq!(r("1000").to_decimal(2), "1000");
        assert_eq!(r("999999").to_decimal(3), "1000000");
        assert_eq!(r("1/400").to_decimal(4), "0.0025");
        assert_eq!(Rational::zero().to_decimal(5), "0");
        // round-half-even
        assert_eq!(r("25/10").to_decimal(1), "2");
        assert_eq!(r("35/10").to_decimal(1), "4");
    }

    #[test]
    fn decimal_parse() {
        assert_eq!(Rational::from_decimal_str("0.25").unwrap(), r("1/4"));
        assert_eq!(Rational::from_decimal_str("-3.5").unwrap(), r("-7/2"));
        assert_eq!(Rational::from_decimal_str("5e-1").unwrap(), r("1/2"));
        assert_eq!(Rational::from_decimal_str("1.25e2").unwrap(), r("125"));
        assert!(Rational::from_decimal_str("x").is_err());
    }

    #[test]
    fn sqrt_floor_bounds() {
        let two = r("2");
        let s = two.sqrt_floor(20).unwrap();
        let err = &two - &(&s * &s);
        assert!(!s.is_negative());
        assert!(err.is_positive() || err.is_zero());
        let truth = Rational::from_decimal_str("1.41421356237309504880").unwrap();
        assert!((&s - &truth).abs() <= r("1/10000000000000000000"));
    }

    #[test]
    fn serde_as_string() {
        let v: Rational = serde_json::from_str("\"3/4\"").unwrap();
        assert_eq!(v, r("3/4"));
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"3/4\"");
        assert!(serde_json::from_str::<Rational>("\"1/0\"").is_err());
    }
}
