//! Product kernel.
//!
//! Both operands are sorted by monomial. Terms are grouped by the exponents
//! of the leading variables (the "prefix"); every output prefix is the sum of
//! one input prefix from each side, so each output prefix bucket can be
//! accumulated independently in a small hash map, sorted, and appended. The
//! concatenation of buckets in prefix order is already globally sorted, and
//! since bucket contents never depend on the worker schedule the result is
//! identical for any number of threads.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::coeff::Coeff;
use super::{MemoryBudget, Monomial};
use crate::{Error, Result};

const BATCH_WORK: usize = 1 << 22;
const PROGRESS_EVERY: Duration = Duration::from_secs(5);

struct Group {
    prefix: u128,
    start: usize,
    end: usize,
}

fn prefix_groups(monos: &[Monomial], shift: u32) -> Vec<Group> {
    let mut groups: Vec<Group> = Vec::new();
    for (i, m) in monos.iter().enumerate() {
        let p = m.raw() >> shift;
        match groups.last_mut() {
            Some(g) if g.prefix == p => g.end = i + 1,
            _ => groups.push(Group {
                prefix: p,
                start: i,
                end: i + 1,
            }),
        }
    }
    groups
}

/// Number of leading variables used to bucket the output.
fn prefix_len(n_vars: usize) -> u32 {
    match n_vars {
        0 | 1 => 1,
        2..=7 => 2,
        _ => 3,
    }
}

pub(crate) struct Operand<'a, C> {
    pub monos: &'a [Monomial],
    pub coeffs: &'a [C],
}

/// Multiplies two sorted term lists. `term_bytes` is the resident size of
/// one output term, used against `budget` together with the inputs.
pub(crate) fn mul_terms<C: Coeff>(
    a: Operand<'_, C>,
    b: Operand<'_, C>,
    n_vars: usize,
    term_bytes: usize,
    budget: MemoryBudget,
) -> Result<(Vec<Monomial>, Vec<C>)> {
    if a.monos.is_empty() || b.monos.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    // keep the longer operand outside so buckets stay balanced
    let (a, b) = if a.monos.len() >= b.monos.len() { (a, b) } else { (b, a) };
    let shift = 8 * (16 - prefix_len(n_vars));
    let ga = prefix_groups(a.monos, shift);
    let gb = prefix_groups(b.monos, shift);

    let mut buckets: FxHashMap<u128, Vec<(u32, u32)>> = FxHashMap::default();
    for (i, x) in ga.iter().enumerate() {
        for (j, y) in gb.iter().enumerate() {
            buckets
                .entry(x.prefix + y.prefix)
                .or_default()
                .push((i as u32, j as u32));
        }
    }
    let mut keys: Vec<u128> = buckets.keys().copied().collect();
    keys.sort_unstable();

    let input_bytes = ((a.monos.len() + b.monos.len()) * term_bytes) as u64;
    let mut out_m: Vec<Monomial> = Vec::new();
    let mut out_c: Vec<C> = Vec::new();
    let started = Instant::now();
    let mut last_report = started;

    let work_of = |key: &u128| -> usize {
        buckets[key]
            .iter()
            .map(|&(i, j)| {
                let x = &ga[i as usize];
                let y = &gb[j as usize];
                (x.end - x.start) * (y.end - y.start)
            })
            .sum()
    };

    let mut pos = 0;
    while pos < keys.len() {
        let mut end = pos;
        let mut work = 0;
        while end < keys.len() && (work < BATCH_WORK || end == pos) {
            work += work_of(&keys[end]);
            end += 1;
        }
        let batch: Vec<Vec<(Monomial, C)>> = keys[pos..end]
            .par_iter()
            .map(|key| {
                let mut acc: FxHashMap<u128, C> = FxHashMap::default();
                for &(i, j) in &buckets[key] {
                    let x = &ga[i as usize];
                    let y = &gb[j as usize];
                    for p in x.start..x.end {
                        let (ma, ca) = (a.monos[p].raw(), &a.coeffs[p]);
                        for q in y.start..y.end {
                            acc.entry(ma + b.monos[q].raw())
                                .or_insert_with(C::zero)
                                .mul_add(ca, &b.coeffs[q]);
                        }
                    }
                }
                let mut terms: Vec<(Monomial, C)> = acc
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (Monomial::from_raw(m), c))
                    .collect();
                terms.sort_unstable_by_key(|t| t.0);
                terms
            })
            .collect();
        for bucket in batch {
            out_m.reserve(bucket.len());
            out_c.reserve(bucket.len());
            for (m, c) in bucket {
                out_m.push(m);
                out_c.push(c);
            }
        }
        let resident = input_bytes + (out_m.len() * term_bytes) as u64;
        if resident > budget.bytes() {
            return Err(Error::BudgetExceeded {
                budget: budget.bytes(),
                needed: resident,
                context: format!(
                    "product reached {} terms after {} of {} buckets",
                    out_m.len(),
                    end,
                    keys.len()
                ),
            });
        }
        if last_report.elapsed() >= PROGRESS_EVERY {
            last_report = Instant::now();
            log::info!(
                "multiply: {} terms so far, {}/{} buckets, {:.1}s",
                out_m.len(),
                end,
                keys.len(),
                started.elapsed().as_secs_f64()
            );
        }
        pos = end;
    }
    Ok((out_m, out_c))
}

/// Sums shifted and optionally negated copies of sorted term lists:
/// `sum_i (+/-) shift_i * part_i`.
pub(crate) fn shifted_sum<C: Coeff>(parts: &[(Monomial, bool, Operand<'_, C>)]) -> (Vec<Monomial>, Vec<C>) {
    let total: usize = parts.iter().map(|p| p.2.monos.len()).sum();
    let mut all: Vec<(Monomial, C)> = Vec::with_capacity(total);
    for (shift, negate, op) in parts {
        for (m, c) in op.monos.iter().zip(op.coeffs) {
            let mut c = c.clone();
            if *negate {
                c.negate();
            }
            all.push((*m * *shift, c));
        }
    }
    all.sort_unstable_by_key(|t| t.0);
    let mut out_m: Vec<Monomial> = Vec::with_capacity(all.len());
    let mut out_c: Vec<C> = Vec::with_capacity(all.len());
    for (m, c) in all {
        if out_m.last() == Some(&m) {
            out_c.last_mut().expect("parallel vectors").add_assign(&c);
        } else {
            out_m.push(m);
            out_c.push(c);
        }
    }
    let keep: Vec<bool> = out_c.iter().map(|c| !c.is_zero()).collect();
    let mut flags = keep.iter();
    out_m.retain(|_| *flags.next().expect("parallel vectors"));
    let mut flags = keep.iter();
    out_c.retain(|_| *flags.next().expect("parallel vectors"));
    (out_m, out_c)
}

/// Merges two sorted term lists, dropping cancelled terms.
pub(crate) fn add_terms<C: Coeff>(a: Operand<'_, C>, b: Operand<'_, C>) -> (Vec<Monomial>, Vec<C>) {
    let mut out_m = Vec::with_capacity(a.monos.len() + b.monos.len());
    let mut out_c = Vec::with_capacity(a.monos.len() + b.monos.len());
    let (mut i, mut j) = (0, 0);
    while i < a.monos.len() || j < b.monos.len() {
        let take_a = j >= b.monos.len() || (i < a.monos.len() && a.monos[i] < b.monos[j]);
        let take_b = i >= a.monos.len() || (j < b.monos.len() && b.monos[j] < a.monos[i]);
        if take_a {
            out_m.push(a.monos[i]);
            out_c.push(a.coeffs[i].clone());
            i += 1;
        } else if take_b {
            out_m.push(b.monos[j]);
            out_c.push(b.coeffs[j].clone());
            j += 1;
        } else {
            let mut c = a.coeffs[i].clone();
            c.add_assign(&b.coeffs[j]);
            if !c.is_zero() {
                out_m.push(a.monos[i]);
                out_c.push(c);
            }
            i += 1;
            j += 1;
        }
    }
    (out_m, out_c)
}
