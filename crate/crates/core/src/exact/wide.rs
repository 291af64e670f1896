//! Integer representations for scaled partial sums.
//!
//! Every search works on integers `L · Σ s_n / b_n` where `L` is a common
//! denominator. The width needed is known before the search starts, so the
//! hot loops run on the narrowest type that holds every intermediate value:
//! `i128`, fixed-width two's-complement words, or `BigInt` as a last resort.

use num_bigint::BigInt;
use num_traits::Signed;
use std::cmp::Ordering;
use std::fmt::Debug;

pub(crate) trait Scalar: Clone + Ord + Send + Sync + Debug + 'static {
    /// Largest magnitude bit length that add/sub of two values never overflows.
    const SAFE_BITS: u64;

    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn abs_diff(&self, rhs: &Self) -> Self {
        let d = self.sub(rhs);
        if d < Self::zeroed() {
            Self::zeroed().sub(&d)
        } else {
            d
        }
    }
    fn zeroed() -> Self;
}

impl Scalar for i128 {
    const SAFE_BITS: u64 = 125;

    fn from_big(v: &BigInt) -> Self {
        i128::try_from(v).expect("value exceeds the selected width")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn zeroed() -> Self {
        0
    }
}

impl Scalar for BigInt {
    const SAFE_BITS: u64 = u64::MAX;

    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn abs_diff(&self, rhs: &Self) -> Self {
        (self - rhs).abs()
    }
    fn zeroed() -> Self {
        BigInt::default()
    }
}

/// A signed two's-complement integer of `L` little-endian 64-bit limbs.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Wide<const L: usize>([u64; L]);

impl<const L: usize> Wide<L> {
    fn is_negative(&self) -> bool {
        (self.0[L - 1] as i64) < 0
    }
}

impl<const L: usize> Debug for Wide<L> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_big())
    }
}

impl<const L: usize> Ord for Wide<L> {
    fn cmp(&self, other: &Self) -> Ordering {
        let top = (self.0[L - 1] as i64).cmp(&(other.0[L - 1] as i64));
        if top != Ordering::Equal {
            return top;
        }
        for i in (0..L - 1).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl<const L: usize> PartialOrd for Wide<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const L: usize> Scalar for Wide<L> {
    const SAFE_BITS: u64 = 64 * L as u64 - 3;

    fn from_big(v: &BigInt) -> Self {
        let bytes = v.to_signed_bytes_le();
        assert!(bytes.len() <= 8 * L, "value exceeds the selected width");
        let fill = if v.is_negative() { 0xff } else { 0 };
        let mut limbs = [0u64; L];
        for (i, limb) in limbs.iter_mut().enumerate() {
            let mut word = [fill; 8];
            for (j, w) in word.iter_mut().enumerate() {
                if let Some(&b) = bytes.get(8 * i + j) {
                    *w = b;
                }
            }
            *limb = u64::from_le_bytes(word);
        }
        Self(limbs)
    }

    fn to_big(&self) -> BigInt {
        let bytes: Vec<u8> = self.0.iter().flat_map(|l| l.to_le_bytes()).collect();
        BigInt::from_signed_bytes_le(&bytes)
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = [0u64; L];
        let mut carry = false;
        for i in 0..L {
            let (s1, c1) = self.0[i].overflowing_add(rhs.0[i]);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            out[i] = s2;
            carry = c1 || c2;
        }
        Self(out)
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = [0u64; L];
        let mut borrow = false;
        for i in 0..L {
            let (d1, b1) = self.0[i].overflowing_sub(rhs.0[i]);
            let (d2, b2) = d1.overflowing_sub(borrow as u64);
            out[i] = d2;
            borrow = b1 || b2;
        }
        Self(out)
    }

    fn abs_diff(&self, rhs: &Self) -> Self {
        let d = self.sub(rhs);
        if d.is_negative() {
            rhs.sub(self)
        } else {
            d
        }
    }

    fn zeroed() -> Self {
        Self([0; L])
    }
}

/// Runs `$body` with `$t` bound to the narrowest scalar type whose safe width
/// covers `$bits` magnitude bits.
macro_rules! with_scalar {
    ($bits:expr, $t:ident => $body:expr) => {{
        use $crate::exact::wide::{Scalar as _, Wide};
        let bits: u64 = $bits;
        if bits <= <i128>::SAFE_BITS {
            type $t = i128;
            $body
        } else if bits <= <Wide<4>>::SAFE_BITS {
            type $t = Wide<4>;
            $body
        } else if bits <= <Wide<8>>::SAFE_BITS {
            type $t = Wide<8>;
            $body
        } else if bits <= <Wide<16>>::SAFE_BITS {
            type $t = Wide<16>;
            $body
        } else {
            type $t = num_bigint::BigInt;
            $body
        }
    }};
}
pub(crate) use with_scalar;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn round_trips_extremes() {
        for s in ["0", "-1", "1", "340282366920938463463374607431768211456", "-98765432109876543210987654321098765432109876"] {
            let v = big(s);
            assert_eq!(Wide::<4>::from_big(&v).to_big(), v);
            assert_eq!(Wide::<8>::from_big(&v).to_big(), v);
        }
    }

    fn arb_big() -> impl Strategy<Value = BigInt> {
        (any::<bool>(), prop::collection::vec(any::<u32>(), 0..7)).prop_map(|(neg, digits)| {
            let mut v = BigInt::default();
            for d in digits {
                v = (v << 32) + d;
            }
            if neg { -v } else { v }
        })
    }

    proptest! {
        #[test]
        fn wide_ops_match_bigint(a in arb_big(), b in arb_big()) {
            let (wa, wb) = (Wide::<4>::from_big(&a), Wide::<4>::from_big(&b));
            prop_assert_eq!(wa.add(&wb).to_big(), &a + &b);
            prop_assert_eq!(wa.sub(&wb).to_big(), &a - &b);
            prop_assert_eq!(wa.abs_diff(&wb).to_big(), (&a - &b).abs());
            prop_assert_eq!(wa.cmp(&wb), a.cmp(&b));
        }
    }
}
