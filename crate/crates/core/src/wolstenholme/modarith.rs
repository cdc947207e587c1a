//! Fixed-width modular arithmetic.
//!
//! [`Mod64`] covers moduli below 2^63 with a `u128` product. [`Mont128`]
//! covers odd moduli below 2^127 in Montgomery form with `R = 2^128`; the
//! product is a 256-bit value held as two `u128` halves.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub(crate) trait ModRing: Sync {
    type Elem: Copy + Eq + Send + Sync;

    fn modulus(&self) -> u128;
    fn lift_u64(&self, x: u64) -> Self::Elem;
    fn to_u128(&self, a: Self::Elem) -> u128;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;

    fn one(&self) -> Self::Elem {
        self.lift_u64(1)
    }

    fn zero(&self) -> Self::Elem {
        self.lift_u64(0)
    }

    /// Inverse of a unit; `None` when `a` shares a factor with the modulus.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem> {
        let m = BigInt::from(self.modulus());
        let x = BigInt::from(self.to_u128(a)).modinv(&m)?;
        Some(self.lift_u128(x.to_u128().expect("reduced")))
    }

    fn lift_u128(&self, x: u128) -> Self::Elem;
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Mod64 {
    m: u64,
}

impl Mod64 {
    pub fn new(m: u64) -> Self {
        assert!((1..1 << 63).contains(&m), "modulus out of range");
        Mod64 { m }
    }
}

impl ModRing for Mod64 {
    type Elem = u64;

    fn modulus(&self) -> u128 {
        self.m as u128
    }

    #[inline]
    fn lift_u64(&self, x: u64) -> u64 {
        x % self.m
    }

    fn lift_u128(&self, x: u128) -> u64 {
        (x % self.m as u128) as u64
    }

    #[inline]
    fn to_u128(&self, a: u64) -> u128 {
        a as u128
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
}

/// Full 256-bit product as `(hi, lo)`.
#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Mont128 {
    m: u128,
    /// `-m^-1 mod 2^128`
    m_neg_inv: u128,
    /// `2^256 mod m`
    r2: u128,
}

impl Mont128 {
    pub fn new(m: u128) -> Self {
        assert!(
            m % 2 == 1 && m < 1 << 127 && m > 1,
            "modulus must be odd, > 1 and below 2^127"
        );
        let mut inv = m; // correct to 3 bits
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
        }
        debug_assert_eq!(m.wrapping_mul(inv), 1);
        let mut r2 = (u128::MAX % m + 1) % m;
        for _ in 0..128 {
            r2 <<= 1;
            if r2 >= m {
                r2 -= m;
            }
        }
        Mont128 {
            m,
            m_neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    /// `t / 2^128 mod m` for `t < m * 2^128`.
    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let q = lo.wrapping_mul(self.m_neg_inv);
        let (qh, ql) = mul_wide(q, self.m);
        let (_, carry) = lo.overflowing_add(ql);
        let t = hi + qh + carry as u128;
        if t >= self.m {
            t - self.m
        } else {
            t
        }
    }
}

impl ModRing for Mont128 {
    type Elem = u128;

    fn modulus(&self) -> u128 {
        self.m
    }

    fn lift_u64(&self, x: u64) -> u128 {
        self.lift_u128(x as u128)
    }

    fn lift_u128(&self, x: u128) -> u128 {
        let (hi, lo) = mul_wide(x % self.m, self.r2);
        self.redc(hi, lo)
    }

    fn to_u128(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    #[inline]
    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    #[inline]
    fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn reference_mul(a: u128, b: u128, m: u128) -> u128 {
        ((BigInt::from(a) * BigInt::from(b)) % BigInt::from(m))
            .to_u128()
            .unwrap()
    }

    #[test]
    fn wide_product() {
        assert_eq!(mul_wide(u128::MAX, u128::MAX), (u128::MAX - 1, 1));
        assert_eq!(mul_wide(1 << 64, 1 << 64), (1, 0));
    }

    #[test]
    fn montgomery_round_trip() {
        let r = Mont128::new(2124679u128.pow(4));
        for x in [0u128, 1, 2, 12345678901234567890, 2124679u128.pow(4) - 1] {
            assert_eq!(r.to_u128(r.lift_u128(x)), x);
        }
        assert_eq!(r.to_u128(r.one()), 1);
    }

    #[test]
    fn inverses() {
        let r = Mont128::new(625);
        let a = r.lift_u64(7);
        assert_eq!(r.to_u128(r.mul(a, r.inv(a).unwrap())), 1);
        assert!(r.inv(r.lift_u64(10)).is_none());
        let s = Mod64::new(625);
        assert_eq!(s.mul(7, s.inv(7).unwrap()), 1);
    }

    proptest! {
        #[test]
        fn montgomery_matches_bigint(m in (3u128..(1u128 << 127)).prop_map(|m| m | 1), a: u128, b: u128) {
            let r = Mont128::new(m);
            let (x, y) = (r.lift_u128(a), r.lift_u128(b));
            prop_assert_eq!(r.to_u128(r.mul(x, y)), reference_mul(a % m, b % m, m));
            prop_assert_eq!(r.to_u128(r.add(x, y)), (a % m + b % m) % m);
        }

        #[test]
        fn small_matches_bigint(m in 1u64..(1u64 << 63), a: u64, b: u64) {
            let r = Mod64::new(m);
            let (x, y) = (r.lift_u64(a), r.lift_u64(b));
            prop_assert_eq!(r.mul(x, y) as u128, reference_mul(a as u128, b as u128, m as u128));
        }
    }
}
