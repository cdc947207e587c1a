//! Determinant expansion by Laplace along columns, memoised over row subsets.
//!
//! `D(S)` is the minor on rows `S` and columns `0..|S|`. Expanding along the
//! last column gives `D(S) = sum_{r in S} (-1)^{pos(r) + |S| - 1} x_{M[r][|S|-1]} D(S \ r)`
//! with `pos(r)` the rank of `r` inside `S`. Only two levels are resident.

use rayon::prelude::*;

use super::GroupMatrix;
use crate::poly::{CoefficientMode, MemoryBudget, Monomial, SparsePoly};
use crate::{Error, Result};

/// Largest matrix order accepted by [`det_subset_dp`].
pub const MAX_DP_ORDER: usize = 16;

pub fn det_subset_dp(m: &GroupMatrix, mode: CoefficientMode, budget: MemoryBudget) -> Result<SparsePoly> {
    let n = m.order();
    if n > MAX_DP_ORDER {
        return Err(Error::OrderTooLarge(n));
    }
    let mut level: Vec<(u32, SparsePoly)> = vec![(0, SparsePoly::one(n)?.to_mode(mode)?)];
    for size in 1..=n {
        let col = size - 1;
        let prev = &level;
        let masks = masks_of_size(n, size);
        let lookup = |mask: u32| -> &SparsePoly {
            let i = prev
                .binary_search_by_key(&mask, |e| e.0)
                .expect("previous level is complete");
            &prev[i].1
        };
        let next: Vec<(u32, SparsePoly)> = masks
            .par_iter()
            .map(|&mask| {
                let mut parts: Vec<(Monomial, bool, &SparsePoly)> = Vec::with_capacity(size);
                let mut pos = 0;
                for r in 0..n {
                    if mask & (1 << r) == 0 {
                        continue;
                    }
                    let negate = (pos + col) % 2 == 1;
                    parts.push((Monomial::var(m.entry(r, col)), negate, lookup(mask & !(1 << r))));
                    pos += 1;
                }
                SparsePoly::shifted_sum(n, &parts).map(|p| (mask, p))
            })
            .collect::<Result<_>>()?;
        let resident: u64 = prev.iter().chain(&next).map(|e| e.1.resident_bytes()).sum();
        if resident > budget.bytes() {
            return Err(Error::BudgetExceeded {
                budget: budget.bytes(),
                needed: resident,
                context: format!("subset expansion at minor size {size}"),
            });
        }
        log::debug!("subset expansion: level {size} of {n}, {} minors", next.len());
        level = next;
    }
    Ok(level.pop().expect("full set").1)
}

/// All `n`-bit masks with `size` bits set, ascending.
fn masks_of_size(n: usize, size: usize) -> Vec<u32> {
    (0u32..(1 << n)).filter(|m| m.count_ones() as usize == size).collect()
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::det::group_matrix;
    use crate::group::{direct_product, make_cyclic};

    /// Leibniz expansion over all permutations, as a term map.
    fn leibniz(m: &GroupMatrix) -> SparsePoly {
        let n = m.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut terms: Vec<(Vec<u8>, BigInt)> = Vec::new();
        loop {
            let mut exps = vec![0u8; n];
            for (r, &c) in perm.iter().enumerate() {
                exps[m.entry(r, c)] += 1;
            }
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            terms.push((exps, BigInt::from(if inversions % 2 == 0 { 1 } else { -1 })));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        SparsePoly::from_terms(n, terms).unwrap()
    }

    fn dp(g: &crate::group::FiniteGroup) -> SparsePoly {
        det_subset_dp(
            &group_matrix(g).unwrap(),
            CoefficientMode::Exact,
            MemoryBudget::default(),
        )
        .unwrap()
    }

    #[test]
    fn cyclic_small() {
        assert_eq!(dp(&make_cyclic(1).unwrap()).to_string(), "x0");
        assert_eq!(dp(&make_cyclic(2).unwrap()).to_string(), "x0^2 - x1^2");
        assert_eq!(dp(&make_cyclic(4).unwrap()).term_count(), 10);
    }

    #[test]
    fn klein_four_matches_leibniz() {
        let c2 = make_cyclic(2).unwrap();
        let v4 = direct_product(&c2, &c2).unwrap();
        let m = group_matrix(&v4).unwrap();
        let expected = leibniz(&m);
        assert_eq!(dp(&v4), expected);
    }

    #[test]
    fn cyclic_matches_leibniz() {
        for n in 1..=6 {
            let g = make_cyclic(n).unwrap();
            assert_eq!(dp(&g), leibniz(&group_matrix(&g).unwrap()), "n={n}");
        }
    }

    #[test]
    fn order_cap() {
        let g = make_cyclic(17).unwrap();
        let m = group_matrix(&g).unwrap();
        assert!(matches!(
            det_subset_dp(&m, CoefficientMode::Exact, MemoryBudget::default()),
            Err(Error::OrderTooLarge(17))
        ));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = make_cyclic(8).unwrap();
        let m = group_matrix(&g).unwrap();
        let r = det_subset_dp(&m, CoefficientMode::Exact, MemoryBudget::new(1024));
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
