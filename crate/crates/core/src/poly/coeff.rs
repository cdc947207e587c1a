use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// The modulus used in Monte Carlo mode, the Mersenne prime 2^61 - 1.
pub const MODPRIME_Q: u64 = (1 << 61) - 1;

/// Ring operations needed by the multiplication kernels.
///
/// `i128` arithmetic wraps: callers prove via l1-norm bounds that no
/// intermediate value leaves the `i128` range before choosing it.
pub(crate) trait Coeff: Clone + Send + Sync + PartialEq + Debug + 'static {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, rhs: &Self);
    /// `self += a * b`
    fn mul_add(&mut self, a: &Self, b: &Self);
    fn negate(&mut self);
    /// Approximate resident size, used for memory budgeting.
    fn heap_bytes(&self) -> usize {
        0
    }
}

impl Coeff for i128 {
    #[inline]
    fn zero() -> Self {
        0
    }
    #[inline]
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn add_assign(&mut self, rhs: &Self) {
        *self = self.wrapping_add(*rhs);
    }
    #[inline]
    fn mul_add(&mut self, a: &Self, b: &Self) {
        *self = self.wrapping_add(a.wrapping_mul(*b));
    }
    #[inline]
    fn negate(&mut self) {
        *self = self.wrapping_neg();
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_add(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn negate(&mut self) {
        *self = -std::mem::take(self);
    }
    fn heap_bytes(&self) -> usize {
        (self.bits() as usize).div_ceil(64) * 8
    }
}

/// Residue modulo [`MODPRIME_Q`], always kept in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModQ(pub(crate) u64);

impl ModQ {
    #[inline]
    fn reduce128(x: u128) -> u64 {
        let q = MODPRIME_Q as u128;
        let s = (x & q) + (x >> 61);
        let s = (s & q) + (s >> 61);
        let s = s as u64;
        if s >= MODPRIME_Q {
            s - MODPRIME_Q
        } else {
            s
        }
    }

    pub fn from_i128(v: i128) -> Self {
        ModQ(v.rem_euclid(MODPRIME_Q as i128) as u64)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(MODPRIME_Q));
        ModQ(r.to_u64().expect("residue below q"))
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl Coeff for ModQ {
    #[inline]
    fn zero() -> Self {
        ModQ(0)
    }
    #[inline]
    fn from_i64(v: i64) -> Self {
        ModQ::from_i128(v as i128)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    #[inline]
    fn add_assign(&mut self, rhs: &Self) {
        let s = self.0 + rhs.0;
        self.0 = if s >= MODPRIME_Q { s - MODPRIME_Q } else { s };
    }
    #[inline]
    fn mul_add(&mut self, a: &Self, b: &Self) {
        let p = ModQ(Self::reduce128(a.0 as u128 * b.0 as u128));
        self.add_assign(&p);
    }
    #[inline]
    fn negate(&mut self) {
        if self.0 != 0 {
            self.0 = MODPRIME_Q - self.0;
        }
    }
}

/// Sum of absolute values of `i128` coefficients, `None` if it does not fit
/// in a `u128`.
pub(crate) fn l1_wide(coeffs: &[i128]) -> Option<u128> {
    coeffs
        .iter()
        .try_fold(0u128, |acc, c| acc.checked_add(c.unsigned_abs()))
}

pub(crate) fn l1_big(coeffs: &[BigInt]) -> BigInt {
    coeffs.iter().map(|c| c.abs()).sum()
}

/// Largest l1 norm for which wrapping `i128` arithmetic is provably exact.
pub(crate) const WIDE_LIMIT: u128 = i128::MAX as u128;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mersenne_reduction() {
        let a = ModQ(MODPRIME_Q - 1);
        let mut acc = ModQ(0);
        acc.mul_add(&a, &a);
        assert_eq!(acc, ModQ(1));
        assert_eq!(ModQ::from_i128(-1), ModQ(MODPRIME_Q - 1));
        assert_eq!(ModQ::from_bigint(&BigInt::from(-2)), ModQ(MODPRIME_Q - 2));
        let mut n = ModQ(5);
        n.negate();
        n.add_assign(&ModQ(5));
        assert!(n.is_zero());
    }

    #[test]
    fn l1_overflow_detected() {
        assert_eq!(l1_wide(&[3, -4]), Some(7));
        assert_eq!(l1_wide(&[i128::MAX, i128::MAX, i128::MAX]), None);
    }
}
