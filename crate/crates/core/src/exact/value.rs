use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// An exact rational number kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactValue(BigRational);

impl ExactValue {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, Error> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Self(BigRational::new(num.into(), den)))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    /// The exact binary value of a finite `f64`.
    pub fn from_f64(x: f64) -> Result<Self, Error> {
        BigRational::from_float(x)
            .map(Self)
            .ok_or_else(|| Error::InvalidInput(format!("{x} is not finite")))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self(r)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn num(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn den(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Natural logarithm, accurate even when numerator and denominator overflow `f64`.
    pub fn ln(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        big_ln(&self.num().abs()) - big_ln(self.den())
    }
}

pub(crate) fn big_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl std::ops::Add for &ExactValue {
    type Output = ExactValue;
    fn add(self, rhs: &ExactValue) -> ExactValue {
        ExactValue(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &ExactValue {
    type Output = ExactValue;
    fn sub(self, rhs: &ExactValue) -> ExactValue {
        ExactValue(&self.0 - &rhs.0)
    }
}

impl std::ops::Neg for &ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue(-&self.0)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num(), self.den())
    }
}

/// Accepts integers (`-3`), fractions (`7/5`), and finite decimals (`-0.125`, `1.5e-3`).
impl FromStr for ExactValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("cannot parse {s:?} as an exact rational"));
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            return ExactValue::new(p, q);
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let all: String = [int_part, frac_part].concat();
        let mut num = BigInt::from_str(&all).map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let ten = BigInt::from(10u32);
        let r = if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Self(r))
    }
}

impl From<BigRational> for ExactValue {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl Default for ExactValue {
    fn default() -> Self {
        Self::zero()
    }
}

impl serde::Serialize for ExactValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Serializes a big integer as a decimal string.
pub(crate) fn decimal<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExactValue {
        s.parse().unwrap()
    }

    #[test]
    fn parses_exact_forms() {
        assert_eq!(v("7/5"), ExactValue::new(7, 5).unwrap());
        assert_eq!(v("14/10"), ExactValue::new(7, 5).unwrap());
        assert_eq!(v("-3"), ExactValue::from_integer(-3));
        assert_eq!(v("1.25"), ExactValue::new(5, 4).unwrap());
        assert_eq!(v("-0.1"), ExactValue::new(-1, 10).unwrap());
        assert_eq!(v(".5"), ExactValue::new(1, 2).unwrap());
        assert_eq!(v("15e-1"), ExactValue::new(3, 2).unwrap());
        assert_eq!(v("2E2"), ExactValue::from_integer(200));
        assert_eq!(v("3/-6"), ExactValue::new(-1, 2).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "--1", "1e", "0x10", "."] {
            assert!(s.parse::<ExactValue>().is_err(), "{s}");
        }
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(v("6/4").to_string(), "3/2");
        assert_eq!(v("0").to_string(), "0/1");
    }

    #[test]
    fn log_of_huge_ratio() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = ExactValue::new(BigInt::from(3), big).unwrap();
        assert!((r.ln() - (3f64.ln() - 400.0 * 10f64.ln())).abs() < 1e-9);
    }
}
