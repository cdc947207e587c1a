//! Circulant determinants as products of character sums.
//!
//! `Theta(C_n) = prod_{d | n} G_d` where
//! `G_d = prod_{i in (Z/d)^*} sum_j zeta_d^{i j} x_j` has rational integer
//! coefficients. Each `G_d` is expanded with coefficients in `Z[zeta_d]`,
//! stored as flat blocks of `phi(d)` integers per monomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use super::cyclotomic::CycloRing;
use crate::poly::{Coeff, CoefficientMode, MemoryBudget, Monomial, SparsePoly, MAX_VARS};
use crate::{Error, Result};

/// `Theta(C_n)` with variable `j` standing for the `j`-th power of a
/// generator.
pub fn det_circulant_character(n: usize, mode: CoefficientMode) -> Result<SparsePoly> {
    det_circulant_character_with_budget(n, mode, MemoryBudget::default())
}

pub fn det_circulant_character_with_budget(
    n: usize,
    mode: CoefficientMode,
    budget: MemoryBudget,
) -> Result<SparsePoly> {
    if n == 0 {
        return Err(Error::InvalidOrder {
            order: 0,
            reason: "order must be positive",
        });
    }
    if n > MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    // largest factors first: later factors are then cheap low-degree ones
    let mut divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    divisors.sort_by_key(|&d| std::cmp::Reverse((CycloRing::new(d).degree(), d)));
    let mut acc = SparsePoly::one(n)?.to_mode(mode)?;
    for d in divisors {
        let factor = divisor_factor(n, d)?.to_mode(mode)?;
        acc = acc.mul(&factor, budget)?;
    }
    Ok(acc)
}

/// The norm product `G_d` in `n` variables, exactly.
pub fn divisor_factor(n: usize, d: usize) -> Result<SparsePoly> {
    let ring = CycloRing::new(d);
    let units: Vec<usize> = (0..d).filter(|i| i.gcd(&d) == 1).collect();
    // every coefficient block has l1 norm at most (n * rho)^t after t factors
    let bound = (n as f64 * ring.max_power_l1() as f64).log2() * units.len() as f64;
    if bound < 126.0 {
        expand::<i128>(n, &ring, &units, |c| Some(BigInt::from(*c)))
    } else {
        expand::<BigInt>(n, &ring, &units, |c| Some(c.clone()))
    }
}

fn expand<C: Coeff>(
    n: usize,
    ring: &CycloRing,
    units: &[usize],
    to_big: impl Fn(&C) -> Option<BigInt>,
) -> Result<SparsePoly> {
    let phi = ring.degree();
    let d = ring.conductor();
    let mut monos: Vec<u128> = vec![Monomial::ONE.raw()];
    let mut coeffs: Vec<C> = vec![C::zero(); phi];
    coeffs[0] = C::from_i64(1);
    let vars: Vec<u128> = (0..n).map(|j| Monomial::var(j).raw()).collect();

    for &i in units {
        let mut index: FxHashMap<u128, usize> = FxHashMap::default();
        let mut next_monos: Vec<u128> = Vec::new();
        let mut next: Vec<C> = Vec::new();
        for (t, &m) in monos.iter().enumerate() {
            let src = &coeffs[t * phi..(t + 1) * phi];
            for (j, &v) in vars.iter().enumerate() {
                let key = m + v;
                let slot = *index.entry(key).or_insert_with(|| {
                    next_monos.push(key);
                    next.extend(std::iter::repeat_n(C::zero(), phi));
                    next_monos.len() - 1
                });
                ring.mul_add_zeta_pow(&mut next[slot * phi..(slot + 1) * phi], src, (i * j) % d);
            }
        }
        monos = next_monos;
        coeffs = next;
    }

    let mut terms: Vec<(Monomial, BigInt)> = Vec::with_capacity(monos.len());
    for (t, &m) in monos.iter().enumerate() {
        let block = &coeffs[t * phi..(t + 1) * phi];
        if block[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal(format!(
                "character product for conductor {d} left an irrational coefficient"
            )));
        }
        let c = to_big(&block[0]).ok_or_else(|| Error::Internal("coefficient conversion".into()))?;
        if !Zero::is_zero(&c) {
            terms.push((Monomial::from_raw(m), c));
        }
    }
    terms.sort_unstable_by_key(|t| t.0);
    let (m, c): (Vec<Monomial>, Vec<BigInt>) = terms.into_iter().unzip();
    let wide: Option<Vec<i128>> = c.iter().map(|x| x.to_i128()).collect();
    Ok(match wide {
        Some(w) => SparsePoly::from_sorted_wide(n, m, w),
        None => SparsePoly::from_sorted_big(n, m, c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: usize) -> SparsePoly {
        det_circulant_character(n, CoefficientMode::Exact).unwrap()
    }

    #[test]
    fn order_one_and_two() {
        assert_eq!(exact(1).to_string(), "x0");
        assert_eq!(exact(2).to_string(), "x0^2 - x1^2");
    }

    #[test]
    fn small_term_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| exact(n).term_count()).collect();
        assert_eq!(counts, vec![1, 2, 4, 10, 26, 68, 246, 810]);
    }

    #[test]
    fn factor_is_sum_of_variables_for_trivial_conductor() {
        let g1 = divisor_factor(3, 1).unwrap();
        assert_eq!(g1.to_string(), "x0 + x1 + x2");
    }

    #[test]
    fn homogeneous_and_singular_at_ones() {
        for n in 2..=9 {
            let t = exact(n);
            assert!(t.is_homogeneous_of_degree(n as u32));
            let ones = vec![BigInt::from(1); n];
            assert!(Zero::is_zero(&t.evaluate(&ones).unwrap()));
            let mut e = vec![BigInt::from(0); n];
            e[0] = BigInt::from(1);
            assert_eq!(t.evaluate(&e).unwrap(), BigInt::from(1));
        }
    }

    #[test]
    fn modular_matches_exact_counts() {
        for n in 1..=9 {
            let m = det_circulant_character(n, CoefficientMode::ModPrime).unwrap();
            assert_eq!(m.term_count(), exact(n).term_count());
        }
    }
}
