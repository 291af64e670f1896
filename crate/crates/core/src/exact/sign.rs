use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Largest number of terms a sign vector can carry.
pub const MAX_SIGNS: usize = 64;

/// A choice of signs `s_1 … s_N`; bit `n − 1` set means `s_n = +1`.
///
/// The integer encoding is also the tie-break order: among equally good sign
/// choices the searches return the one with the smallest `bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignVector {
    bits: u64,
    len: u8,
}

impl SignVector {
    pub fn new(bits: u64, len: usize) -> Result<Self, Error> {
        if len > MAX_SIGNS {
            return Err(Error::CapExceeded {
                what: "sign vector length",
                requested: len as u64,
                cap: MAX_SIGNS as u64,
            });
        }
        if len < MAX_SIGNS && bits >> len != 0 {
            return Err(Error::InvalidInput(format!("bits beyond length {len}")));
        }
        Ok(Self { bits, len: len as u8 })
    }

    /// All signs negative.
    pub fn all_minus(len: usize) -> Result<Self, Error> {
        Self::new(0, len)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `s_{i+1}` as ±1.
    pub fn sign(&self, i: usize) -> i8 {
        assert!(i < self.len());
        if self.bits >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len()).map(|i| self.sign(i))
    }

    /// Every sign flipped.
    pub fn negated(&self) -> Self {
        let mask = if self.len() == MAX_SIGNS {
            u64::MAX
        } else {
            (1u64 << self.len) - 1
        };
        Self {
            bits: !self.bits & mask,
            len: self.len,
        }
    }

    /// `Σ s_n / b_n`, exactly.
    pub fn evaluate(&self, denominators: &[u64]) -> BigRational {
        assert_eq!(denominators.len(), self.len());
        self.signs()
            .zip(denominators)
            .map(|(s, &b)| BigRational::new(BigInt::from(s), BigInt::from(b)))
            .sum()
    }
}

/// Renders as a string of `+` and `-`, `s_1` first.
impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs() {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut bits = 0u64;
        let mut len = 0;
        for c in s.chars() {
            if len == MAX_SIGNS {
                return Err(Error::CapExceeded {
                    what: "sign vector length",
                    requested: s.chars().count() as u64,
                    cap: MAX_SIGNS as u64,
                });
            }
            match c {
                '+' => bits |= 1 << len,
                '-' | '\u{2212}' => {}
                _ => return Err(Error::InvalidInput(format!("bad sign character {c:?}"))),
            }
            len += 1;
        }
        Self::new(bits, len)
    }
}

/// `Σ ε_n / b_n` for a vector of trits `ε_n ∈ {−1, 0, +1}`.
pub fn evaluate_trits(trits: &[i8], denominators: &[u64]) -> BigRational {
    assert_eq!(trits.len(), denominators.len());
    trits
        .iter()
        .zip(denominators)
        .filter(|(&t, _)| t != 0)
        .map(|(&t, &b)| BigRational::new(BigInt::from(t), BigInt::from(b)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_render() {
        let v: SignVector = "+--+".parse().unwrap();
        assert_eq!(v.bits(), 0b1001);
        assert_eq!(v.to_string(), "+--+");
        assert_eq!(v.negated().to_string(), "-++-");
        assert_eq!("+\u{2212}".parse::<SignVector>().unwrap().bits(), 1);
        assert!("+x".parse::<SignVector>().is_err());
    }

    #[test]
    fn evaluates_exactly() {
        let v: SignVector = "+--+".parse().unwrap();
        let got = v.evaluate(&[2, 3, 5, 7]);
        assert_eq!(got, BigRational::new(23.into(), 210.into()));
    }

    #[test]
    fn rejects_stray_bits() {
        assert!(SignVector::new(0b100, 2).is_err());
        assert!(SignVector::new(u64::MAX, 64).is_ok());
        assert_eq!(SignVector::new(u64::MAX, 64).unwrap().negated().bits(), 0);
    }
}
