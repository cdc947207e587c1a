//! Exact arithmetic in `Z[zeta_d]`, represented modulo the cyclotomic
//! polynomial `Phi_d` in the power basis `1, zeta, ..., zeta^(phi(d)-1)`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::poly::Coeff;

/// Integer coefficients of `Phi_d`, lowest degree first.
pub fn cyclotomic_polynomial(d: usize) -> Vec<i64> {
    assert!(d >= 1, "conductor must be positive");
    // x^d - 1 = prod_{e | d} Phi_e(x)
    let mut num = vec![0i64; d + 1];
    num[0] = -1;
    num[d] = 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        num = divide_monic(&num, &cyclotomic_polynomial(e));
    }
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &v) in den.iter().enumerate() {
            rem[k + i] -= c * v;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Precomputed data for one conductor.
#[derive(Clone, Debug)]
pub struct CycloRing {
    d: usize,
    phi: usize,
    modulus: Vec<i64>,
    /// `powers[t]` is `zeta^t` reduced, as sparse (index, coefficient) pairs.
    powers: Vec<Vec<(usize, i64)>>,
}

impl CycloRing {
    pub fn new(d: usize) -> Self {
        let modulus = cyclotomic_polynomial(d);
        let phi = modulus.len() - 1;
        let mut dense = vec![0i64; phi];
        dense[0] = 1;
        let mut powers = Vec::with_capacity(d);
        for _ in 0..d {
            powers.push(
                dense
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (i, c))
                    .collect(),
            );
            // multiply by zeta: shift up, then fold the top coefficient back
            let top = dense[phi - 1];
            for i in (1..phi).rev() {
                dense[i] = dense[i - 1];
            }
            dense[0] = 0;
            for i in 0..phi {
                dense[i] -= top * modulus[i];
            }
        }
        CycloRing {
            d,
            phi,
            modulus,
            powers,
        }
    }

    pub fn conductor(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Largest l1 norm of a reduced power of zeta.
    pub fn max_power_l1(&self) -> u64 {
        self.powers
            .iter()
            .map(|p| p.iter().map(|(_, c)| c.unsigned_abs()).sum::<u64>())
            .max()
            .unwrap_or(1)
    }

    /// `acc += src * zeta^e`, all slices of length `phi`.
    #[inline]
    pub(crate) fn mul_add_zeta_pow<C: Coeff>(&self, acc: &mut [C], src: &[C], e: usize) {
        for (s, c) in src.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(idx, v) in &self.powers[(s + e) % self.d] {
                acc[idx].mul_add(c, &C::from_i64(v));
            }
        }
    }

    /// Full product of two reduced elements.
    pub(crate) fn mul<C: Coeff>(&self, a: &[C], b: &[C]) -> Vec<C> {
        let mut out = vec![C::zero(); self.phi];
        let mut shifted = vec![C::zero(); self.phi];
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            shifted.iter_mut().for_each(|x| *x = C::zero());
            self.mul_add_zeta_pow(&mut shifted, a, j);
            for (o, s) in out.iter_mut().zip(&shifted) {
                o.mul_add(s, bj);
            }
        }
        out
    }
}

/// An element of `Z[zeta_d]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPoly {
    d: usize,
    coeffs: Vec<BigInt>,
}

impl CyclotomicPoly {
    pub fn from_integer(d: usize, value: BigInt) -> Self {
        let phi = cyclotomic_polynomial(d).len() - 1;
        let mut coeffs = vec![<BigInt as Zero>::zero(); phi];
        coeffs[0] = value;
        CyclotomicPoly { d, coeffs }
    }

    /// `zeta_d^e`.
    pub fn zeta_pow(d: usize, e: usize) -> Self {
        let ring = CycloRing::new(d);
        let mut coeffs = vec![<BigInt as Zero>::zero(); ring.phi];
        let mut one = vec![<BigInt as Zero>::zero(); ring.phi];
        one[0] = BigInt::from(1);
        ring.mul_add_zeta_pow(&mut coeffs, &one, e % d);
        CyclotomicPoly { d, coeffs }
    }

    pub fn conductor(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "conductor mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicPoly { d: self.d, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "conductor mismatch");
        let ring = CycloRing::new(self.d);
        CyclotomicPoly {
            d: self.d,
            coeffs: ring.mul(&self.coeffs, &other.coeffs),
        }
    }

    /// The rational integer this element equals, if it lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }
}

impl CycloRing {
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(14), vec![1, -1, 1, -1, 1, -1, 1]);
    }

    #[test]
    fn degree_is_totient() {
        for d in 1..=40 {
            let phi = (1..=d).filter(|k| num_integer::gcd(*k, d) == 1).count();
            assert_eq!(CycloRing::new(d).degree(), phi, "d={d}");
        }
    }

    #[test]
    fn zeta_has_order_d() {
        for d in 1..=16 {
            let z = CyclotomicPoly::zeta_pow(d, 1);
            let mut acc = CyclotomicPoly::from_integer(d, BigInt::from(1));
            for k in 1..=d {
                acc = acc.mul(&z);
                assert_eq!(
                    acc.as_integer().is_some_and(|v| *v == BigInt::from(1)),
                    k == d,
                    "d={d} k={k}"
                );
            }
        }
    }

    #[test]
    fn sum_of_primitive_roots_is_mobius() {
        // sum over units i of zeta_d^i equals mu(d)
        let mobius = |d: usize| -> i64 {
            let mut n = d;
            let mut sign = 1;
            let mut p = 2;
            while p * p <= n {
                if n.is_multiple_of(p) {
                    n /= p;
                    if n.is_multiple_of(p) {
                        return 0;
                    }
                    sign = -sign;
                }
                p += 1;
            }
            if n > 1 {
                sign = -sign;
            }
            sign
        };
        for d in 1..=30 {
            let mut s = CyclotomicPoly::from_integer(d, <BigInt as Zero>::zero());
            for i in (0..d).filter(|i| num_integer::gcd(*i, d) == 1) {
                s = s.add(&CyclotomicPoly::zeta_pow(d, i));
            }
            assert_eq!(s.as_integer(), Some(&BigInt::from(mobius(d))), "d={d}");
        }
    }
}
