//! Group determinants.
//!
//! [`group_determinant`] expands `Theta(G) = det(x_{g h^-1})`. Cyclic groups
//! go through the character product in [`character`]; every other group
//! through the subset expansion in [`subset`]. Both paths are public so they
//! can be checked against each other.

pub mod character;
pub mod cyclotomic;
pub mod subset;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;
use crate::poly::{CoefficientMode, MemoryBudget, SparsePoly, TermCount};
use crate::{Error, Result};

pub use character::{det_circulant_character, det_circulant_character_with_budget, divisor_factor};
pub use cyclotomic::{cyclotomic_polynomial, CycloRing, CyclotomicPoly};
pub use subset::{det_subset_dp, MAX_DP_ORDER};

/// The symbolic matrix `(x_{g h^-1})`, stored as variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMatrix {
    n: usize,
    entry: Vec<usize>,
}

impl GroupMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Variable index at row `g`, column `h`.
    pub fn entry(&self, g: usize, h: usize) -> usize {
        self.entry[g * self.n + h]
    }

    pub fn row(&self, g: usize) -> &[usize] {
        &self.entry[g * self.n..(g + 1) * self.n]
    }
}

pub fn group_matrix(group: &FiniteGroup) -> Result<GroupMatrix> {
    group.ensure_valid()?;
    let n = group.order();
    let mut entry = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            entry.push(group.mul(g, group.inv(h)));
        }
    }
    Ok(GroupMatrix { n, entry })
}

/// Expansion algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Character,
    SubsetDp,
}

impl Method {
    pub fn for_group(group: &FiniteGroup) -> Self {
        if group.is_cyclic() {
            Method::Character
        } else {
            Method::SubsetDp
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Character => "character",
            Method::SubsetDp => "subset-dp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `Theta(G)` with variable `g` standing for element `g` of the table.
pub fn group_determinant(group: &FiniteGroup, mode: CoefficientMode, budget: MemoryBudget) -> Result<SparsePoly> {
    group_determinant_with(group, Method::for_group(group), mode, budget)
}

pub fn group_determinant_with(
    group: &FiniteGroup,
    method: Method,
    mode: CoefficientMode,
    budget: MemoryBudget,
) -> Result<SparsePoly> {
    match method {
        Method::SubsetDp => det_subset_dp(&group_matrix(group)?, mode, budget),
        Method::Character => {
            group.ensure_valid()?;
            let g = group
                .cyclic_generator()
                .ok_or_else(|| Error::InvalidArgument(format!("{} is not cyclic", group.name())))?;
            let n = group.order();
            // variable j of the circulant is the element g^j
            let mut perm = Vec::with_capacity(n);
            let mut x = group.identity();
            for _ in 0..n {
                perm.push(x);
                x = group.mul(x, g);
            }
            det_circulant_character_with_budget(n, mode, budget)?.permute_variables(&perm)
        }
    }
}

/// `N(Theta(G)^j)` for `j = 1..=k`, by repeated multiplication with `Theta(G)`.
/// On budget exhaustion the error context names the last completed exponent.
pub fn term_count_power(
    group: &FiniteGroup,
    k: u32,
    mode: CoefficientMode,
    budget: MemoryBudget,
) -> Result<Vec<TermCount>> {
    let base = group_determinant(group, mode, budget)?;
    let mut counts = Vec::with_capacity(k as usize);
    let result = base.pow_sequence(k, budget, |_, p| {
        counts.push(p.count());
        Ok(())
    });
    match result {
        Ok(_) => Ok(counts),
        Err(Error::BudgetExceeded {
            budget,
            needed,
            context,
        }) => Err(Error::BudgetExceeded {
            budget,
            needed,
            context: format!("{context}; last completed exponent {}", counts.len()),
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_bigint::BigInt;
    use proptest::prelude::*;

    use super::*;
    use crate::group::{direct_product, make_cyclic, make_dihedral, make_quaternion};
    use crate::poly::Monomial;

    const EXACT: CoefficientMode = CoefficientMode::Exact;

    fn budget() -> MemoryBudget {
        MemoryBudget::default()
    }

    #[test]
    fn matrix_of_c2() {
        let m = group_matrix(&make_cyclic(2).unwrap()).unwrap();
        assert_eq!(m.row(0), &[0, 1]);
        assert_eq!(m.row(1), &[1, 0]);
    }

    #[test]
    fn cyclic_matrix_is_circulant() {
        let n = 7;
        let m = group_matrix(&make_cyclic(n).unwrap()).unwrap();
        for g in 0..n {
            for h in 0..n {
                assert_eq!(m.entry(g, h), (g + n - h) % n);
            }
        }
    }

    #[test]
    fn rows_and_columns_are_permutations() {
        let g = make_dihedral(8).unwrap();
        let m = group_matrix(&g).unwrap();
        for i in 0..8 {
            let mut row: Vec<usize> = m.row(i).to_vec();
            let mut col: Vec<usize> = (0..8).map(|r| m.entry(r, i)).collect();
            row.sort_unstable();
            col.sort_unstable();
            assert_eq!(row, (0..8).collect::<Vec<_>>());
            assert_eq!(col, (0..8).collect::<Vec<_>>());
        }
        assert_eq!(m.row(0), (0..8).map(|h| g.inv(h)).collect::<Vec<_>>());
    }

    #[test]
    fn both_methods_agree_on_cyclic_groups() {
        for n in 1..=8 {
            let g = make_cyclic(n).unwrap();
            let dp = group_determinant_with(&g, Method::SubsetDp, EXACT, budget()).unwrap();
            let ch = group_determinant_with(&g, Method::Character, EXACT, budget()).unwrap();
            assert_eq!(dp, ch, "n={n}");
        }
    }

    #[test]
    fn character_method_respects_generator_choice() {
        // C_6 x C_1 relabels elements but is still cyclic
        let g = direct_product(&make_cyclic(3).unwrap(), &make_cyclic(2).unwrap()).unwrap();
        assert!(g.is_cyclic());
        let dp = group_determinant_with(&g, Method::SubsetDp, EXACT, budget()).unwrap();
        let ch = group_determinant_with(&g, Method::Character, EXACT, budget()).unwrap();
        assert_eq!(dp, ch);
        assert_eq!(dp.term_count(), 68);
    }

    #[test]
    fn noncyclic_rejected_by_character_method() {
        let c2 = make_cyclic(2).unwrap();
        let v4 = direct_product(&c2, &c2).unwrap();
        assert!(group_determinant_with(&v4, Method::Character, EXACT, budget()).is_err());
        assert_eq!(Method::for_group(&v4), Method::SubsetDp);
    }

    #[test]
    fn cyclic_term_counts() {
        let counts: Vec<usize> = [3, 5, 7]
            .iter()
            .map(|&n| {
                group_determinant(&make_cyclic(n).unwrap(), EXACT, budget())
                    .unwrap()
                    .term_count()
            })
            .collect();
        assert_eq!(counts, vec![4, 26, 246]);
    }

    #[test]
    fn evaluation_identities() {
        let c2 = make_cyclic(2).unwrap();
        let groups = vec![
            make_cyclic(6).unwrap(),
            direct_product(&c2, &c2).unwrap(),
            make_dihedral(6).unwrap(),
            make_dihedral(8).unwrap(),
            make_quaternion(8).unwrap(),
        ];
        for g in groups {
            let n = g.order();
            let t = group_determinant(&g, EXACT, budget()).unwrap();
            assert!(t.is_homogeneous_of_degree(n as u32), "{}", g.name());
            let mut e = vec![BigInt::from(0); n];
            e[g.identity()] = BigInt::from(1);
            assert_eq!(t.evaluate(&e).unwrap(), BigInt::from(1), "{}", g.name());
            assert_eq!(t.evaluate(&vec![BigInt::from(1); n]).unwrap(), BigInt::from(0));
            let mut diag = [0u8; 16];
            diag[g.identity()] = n as u8;
            let m = Monomial::from_exponents(&diag[..n]).unwrap();
            assert_eq!(t.coefficient(&m), Some(BigInt::from(1)));
        }
    }

    #[test]
    fn rotation_preserves_term_multiset() {
        for n in 2..=8 {
            let t = det_circulant_character(n, EXACT).unwrap();
            let multiset = |p: &SparsePoly| -> BTreeMap<Vec<u8>, usize> {
                let mut m = BTreeMap::new();
                for mono in p.monomials() {
                    let mut e = mono.exponents(n);
                    e.sort_unstable();
                    *m.entry(e).or_default() += 1;
                }
                m
            };
            for c in 1..n {
                let perm: Vec<usize> = (0..n).map(|j| (j + c) % n).collect();
                let r = t.permute_variables(&perm).unwrap();
                assert_eq!(r.term_count(), t.term_count());
                assert_eq!(multiset(&r), multiset(&t));
                // rotating a circulant's first row keeps the term set itself
                assert_eq!(r.monomials(), t.monomials());
            }
        }
    }

    #[test]
    fn power_sequences() {
        let c5 = make_cyclic(5).unwrap();
        let counts: Vec<u64> = term_count_power(&c5, 3, EXACT, budget())
            .unwrap()
            .iter()
            .map(|c| c.terms)
            .collect();
        assert_eq!(counts, vec![26, 201, 776]);
        let c1 = make_cyclic(1).unwrap();
        let ones: Vec<u64> = term_count_power(&c1, 4, EXACT, budget())
            .unwrap()
            .iter()
            .map(|c| c.terms)
            .collect();
        assert_eq!(ones, vec![1; 4]);
        let c4 = make_cyclic(4).unwrap();
        assert_eq!(term_count_power(&c4, 2, EXACT, budget()).unwrap()[1].terms, 43);
        let c3 = make_cyclic(3).unwrap();
        assert_eq!(term_count_power(&c3, 4, EXACT, budget()).unwrap()[3].terms, 31);
    }

    #[test]
    fn power_budget_reports_progress() {
        let c6 = make_cyclic(6).unwrap();
        let base = group_determinant(&c6, EXACT, budget()).unwrap();
        let tight = MemoryBudget::new(base.resident_bytes() * 4);
        match term_count_power(&c6, 6, EXACT, tight) {
            Err(Error::BudgetExceeded { context, .. }) => {
                assert!(context.contains("last completed exponent"), "{context}")
            }
            other => panic!("expected budget failure, got {other:?}"),
        }
    }

    #[test]
    fn parenthesization_does_not_change_counts() {
        let t = det_circulant_character(4, EXACT).unwrap();
        let sq = t.mul(&t, budget()).unwrap();
        let left = sq.mul(&t, budget()).unwrap().mul(&t, budget()).unwrap();
        let right = sq.mul(&sq, budget()).unwrap();
        assert_eq!(left, right);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn modular_count_never_exceeds_exact(n in 1usize..=7) {
            let g = make_cyclic(n).unwrap();
            let e = group_determinant_with(&g, Method::SubsetDp, EXACT, budget()).unwrap();
            let m = group_determinant_with(&g, Method::SubsetDp, CoefficientMode::ModPrime, budget()).unwrap();
            prop_assert!(m.term_count() <= e.term_count());
            prop_assert_eq!(m.term_count(), e.term_count());
        }
    }
}
