//! Order-16 groups given by polycyclic presentations, realised by
//! collecting words into the normal form `g1^a g2^b g3^c`.

use rustc_hash::FxHashMap;

use super::FiniteGroup;
use crate::{Error, Result};

/// The five order-16 groups that are built from presentations rather than
/// from cyclic, dihedral or quaternion factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PresentedGroup {
    /// `<g1,g2,g3 | g1^2 = g2^2 = g3^4 = e, g2 g1 = g1 g2, g3 g1 = g1 g3, g3 g2 = g1 g2 g3>`
    C2sqRtimesC4,
    /// `<g1,g2 | g1^4 = g2^4 = e, g2 g1 = g1^3 g2>`
    C4RtimesC4,
    /// `<g1,g2 | g1^8 = g2^2 = e, g2 g1 = g1^5 g2>`
    C8Rtimes5C2,
    /// `<g1,g2 | g1^8 = g2^2 = e, g2 g1 = g1^3 g2>`
    C8Rtimes3C2,
    /// `<g1,g2,g3 | g1^4 = g3^2 = e, g1^2 = g2^2, g2 g1 = g1 g2, g3 g2 = g2 g3, g3 g1 = g1^3 g3>`
    Q8RtimesC2,
}

/// Relative orders, power relations and commutation rules. Generators are
/// letters `0..k`; every rewrite right-hand side is already sorted.
struct Presentation {
    orders: Vec<usize>,
    powers: Vec<Vec<usize>>,
    swaps: FxHashMap<(usize, usize), Vec<usize>>,
}

const MAX_REWRITES: usize = 100_000;

impl PresentedGroup {
    pub const ALL: [PresentedGroup; 5] = [
        PresentedGroup::C2sqRtimesC4,
        PresentedGroup::C4RtimesC4,
        PresentedGroup::C8Rtimes5C2,
        PresentedGroup::C8Rtimes3C2,
        PresentedGroup::Q8RtimesC2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresentedGroup::C2sqRtimesC4 => "C2^2:C4",
            PresentedGroup::C4RtimesC4 => "C4:C4",
            PresentedGroup::C8Rtimes5C2 => "C8:5C2",
            PresentedGroup::C8Rtimes3C2 => "C8:3C2",
            PresentedGroup::Q8RtimesC2 => "Q8:C2",
        }
    }

    pub fn gap_id(self) -> (u32, u32) {
        match self {
            PresentedGroup::C2sqRtimesC4 => (16, 3),
            PresentedGroup::C4RtimesC4 => (16, 4),
            PresentedGroup::C8Rtimes5C2 => (16, 6),
            PresentedGroup::C8Rtimes3C2 => (16, 8),
            PresentedGroup::Q8RtimesC2 => (16, 13),
        }
    }

    fn presentation(self) -> Presentation {
        let rep = |g: usize, k: usize| vec![g; k];
        let cat = |a: Vec<usize>, b: Vec<usize>| a.into_iter().chain(b).collect::<Vec<_>>();
        let mut swaps = FxHashMap::default();
        let (orders, powers) = match self {
            PresentedGroup::C2sqRtimesC4 => {
                swaps.insert((1, 0), vec![0, 1]);
                swaps.insert((2, 0), vec![0, 2]);
                swaps.insert((2, 1), vec![0, 1, 2]);
                (vec![2, 2, 4], vec![vec![], vec![], vec![]])
            }
            PresentedGroup::C4RtimesC4 => {
                swaps.insert((1, 0), cat(rep(0, 3), vec![1]));
                (vec![4, 4], vec![vec![], vec![]])
            }
            PresentedGroup::C8Rtimes5C2 => {
                swaps.insert((1, 0), cat(rep(0, 5), vec![1]));
                (vec![8, 2], vec![vec![], vec![]])
            }
            PresentedGroup::C8Rtimes3C2 => {
                swaps.insert((1, 0), cat(rep(0, 3), vec![1]));
                (vec![8, 2], vec![vec![], vec![]])
            }
            PresentedGroup::Q8RtimesC2 => {
                swaps.insert((1, 0), vec![0, 1]);
                swaps.insert((2, 1), vec![1, 2]);
                swaps.insert((2, 0), cat(rep(0, 3), vec![2]));
                // g2 has relative order 2 because g2^2 = g1^2
                (vec![4, 2, 2], vec![vec![], rep(0, 2), vec![]])
            }
        };
        Presentation { orders, powers, swaps }
    }

    /// Builds the Cayley table by normal-form enumeration and validates it.
    pub fn build(self) -> Result<FiniteGroup> {
        let pres = self.presentation();
        let normal_forms = enumerate_exponents(&pres.orders);
        let n = normal_forms.len();
        let index: FxHashMap<Vec<usize>, usize> =
            normal_forms.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let words: Vec<Vec<usize>> = normal_forms.iter().map(|e| exponents_to_word(e)).collect();

        let mut mul = Vec::with_capacity(n * n);
        for a in &words {
            for b in &words {
                let mut w = a.clone();
                w.extend_from_slice(b);
                let reduced = pres.collect(w)?;
                let exps = word_to_exponents(&reduced, pres.orders.len());
                let idx = index.get(&exps).copied().ok_or_else(|| {
                    Error::Internal(format!("{}: collected word {reduced:?} is not normal", self.name()))
                })?;
                mul.push(idx);
            }
        }

        let closure = closure_size(&mul, n, &pres.orders, &index);
        if closure != 16 || n != 16 {
            return Err(Error::Internal(format!(
                "{}: closure reached {closure} elements, expected 16",
                self.name()
            )));
        }
        let group = FiniteGroup::from_table(self.name(), n, mul)
            .map_err(|e| Error::Internal(format!("{}: {e}", self.name())))?;
        Ok(group.with_gap_id(self.gap_id()))
    }
}

impl Presentation {
    /// Rewrites a word to normal form: leftmost out-of-order pair first,
    /// then powers that reach the relative order.
    fn collect(&self, mut w: Vec<usize>) -> Result<Vec<usize>> {
        for _ in 0..MAX_REWRITES {
            if let Some(t) = (0..w.len().saturating_sub(1)).find(|&t| w[t] > w[t + 1]) {
                let rhs = &self.swaps[&(w[t], w[t + 1])];
                w.splice(t..t + 2, rhs.iter().copied());
                continue;
            }
            let mut start = 0;
            let mut changed = false;
            while start < w.len() {
                let g = w[start];
                let end = (start..w.len()).find(|&i| w[i] != g).unwrap_or(w.len());
                if end - start >= self.orders[g] {
                    w.splice(start..start + self.orders[g], self.powers[g].iter().copied());
                    changed = true;
                    break;
                }
                start = end;
            }
            if !changed {
                return Ok(w);
            }
        }
        Err(Error::Internal("word collection did not terminate".into()))
    }
}

fn enumerate_exponents(orders: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &o in orders {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..o).map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

fn exponents_to_word(exps: &[usize]) -> Vec<usize> {
    exps.iter()
        .enumerate()
        .flat_map(|(g, &a)| std::iter::repeat_n(g, a))
        .collect()
}

fn word_to_exponents(word: &[usize], generators: usize) -> Vec<usize> {
    let mut exps = vec![0; generators];
    for &g in word {
        exps[g] += 1;
    }
    exps
}

/// Number of elements reachable from the identity by right multiplication
/// with the generators.
fn closure_size(mul: &[usize], n: usize, orders: &[usize], index: &FxHashMap<Vec<usize>, usize>) -> usize {
    let generators: Vec<usize> = (0..orders.len())
        .map(|g| {
            let mut e = vec![0; orders.len()];
            e[g] = 1;
            index[&e]
        })
        .collect();
    let identity = index[&vec![0; orders.len()]];
    let mut seen = vec![false; n];
    seen[identity] = true;
    let mut stack = vec![identity];
    while let Some(x) = stack.pop() {
        for &g in &generators {
            let y = mul[x * n + g];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().filter(|s| **s).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(g: &FiniteGroup) -> Vec<(usize, usize)> {
        g.order_statistics().into_iter().collect()
    }

    #[test]
    fn all_presentations_validate() {
        for p in PresentedGroup::ALL {
            let g = p.build().unwrap();
            assert_eq!(g.order(), 16);
            assert!(g.validate().is_empty(), "{}", p.name());
            assert!(!g.is_abelian(), "{}", p.name());
        }
    }

    #[test]
    fn element_order_profiles() {
        // counts of elements of order 1, 2, 4, 8
        let cases = [
            (PresentedGroup::C2sqRtimesC4, vec![(1, 1), (2, 7), (4, 8)]),
            (PresentedGroup::C4RtimesC4, vec![(1, 1), (2, 3), (4, 12)]),
            (PresentedGroup::C8Rtimes5C2, vec![(1, 1), (2, 3), (4, 4), (8, 8)]),
            (PresentedGroup::C8Rtimes3C2, vec![(1, 1), (2, 5), (4, 6), (8, 4)]),
            (PresentedGroup::Q8RtimesC2, vec![(1, 1), (2, 7), (4, 8)]),
        ];
        for (p, expected) in cases {
            assert_eq!(orders(&p.build().unwrap()), expected, "{}", p.name());
        }
    }

    #[test]
    fn gap_ids() {
        assert_eq!(PresentedGroup::C4RtimesC4.build().unwrap().gap_id(), Some((16, 4)));
        assert_eq!(PresentedGroup::C8Rtimes3C2.build().unwrap().gap_id(), Some((16, 8)));
    }
}
