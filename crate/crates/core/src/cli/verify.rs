//! Verification suites run by `gdet verify`.

use std::collections::BTreeMap;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::runner::{MethodChoice, Runner};
use super::table::OutputFormat;
use crate::det::{det_circulant_character, det_subset_dp, group_determinant_with, group_matrix, Method};
use crate::group::{catalog_order8, make_cyclic};
use crate::partitions::{card_lambda, enumerate_lambda, prime_power_congruence_report};
use crate::poly::{CoefficientMode, TermCount};
use crate::wolstenholme::{central_binom_mod, classify_prime, harmonic_mod, n_theta_via_identity, primes_between};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorems,
    Questions,
    Oracle,
    Crossval,
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            suite,
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

pub fn render(checks: &[Check], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(checks).expect("checks serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::from("suite,check,passed,detail\n");
            for c in checks {
                s.push_str(&format!(
                    "{},{},{},\"{}\"\n",
                    c.suite,
                    c.name,
                    c.passed,
                    c.detail.replace('"', "'")
                ));
            }
            s
        }
        OutputFormat::Human => {
            let mut s = String::new();
            for c in checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("[{tag}] {}/{}: {}\n", c.suite, c.name, c.detail));
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            s.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
            s
        }
    }
}

pub fn run_suite(suite: Suite, runner: &mut Runner) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Theorems => theorems(runner)?,
        Suite::Questions => questions(runner)?,
        Suite::Oracle => oracle()?,
        Suite::Crossval => crossval()?,
        Suite::All => {
            let mut all = oracle()?;
            all.extend(crossval()?);
            all.extend(theorems(runner)?);
            all.extend(questions(runner)?);
            all
        }
    })
}

fn first_mismatch<T: PartialEq + std::fmt::Debug>(
    pairs: impl IntoIterator<Item = (String, T, T)>,
) -> (bool, String, usize) {
    let mut n = 0;
    for (label, a, b) in pairs {
        n += 1;
        if a != b {
            return (false, format!("{label}: {a:?} != {b:?}"), n);
        }
    }
    (true, String::new(), n)
}

/// Formula against enumeration on the criterion set and on every `n <= 7`
/// with `k n <= 30`.
pub fn oracle() -> Result<Vec<Check>> {
    let mut pairs = Vec::new();
    for n in 1..=10u64 {
        let k_max = if n <= 6 { 3 } else { 1 };
        pairs.extend((1..=k_max).map(|k| (n, k)));
    }
    for n in 1..=7u64 {
        pairs.extend((1..=30 / n).map(|k| (n, k)).filter(|&(_, k)| !(n <= 6 && k <= 3)));
    }
    let mut rows = Vec::with_capacity(pairs.len());
    for &(n, k) in &pairs {
        rows.push((
            format!("n={n} k={k}"),
            card_lambda(n, k)?.value,
            enumerate_lambda(n, k)?.value,
        ));
    }
    let (ok, detail, count) = first_mismatch(rows);
    let detail = if ok { format!("{count} pairs agree") } else { detail };
    Ok(vec![Check::new("oracle", "formula-equals-enumeration", ok, detail)])
}

/// Subset expansion against the character product for `C_1 .. C_8`, and
/// basic evaluations of the order-8 determinants.
pub fn crossval() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut detail = Vec::new();
    let mut ok = true;
    for n in 1..=8 {
        let g = make_cyclic(n)?;
        let dp = det_subset_dp(&group_matrix(&g)?, CoefficientMode::Exact, Default::default())?;
        let ch = det_circulant_character(n, CoefficientMode::Exact)?;
        if dp != ch {
            ok = false;
            detail.push(format!(
                "n={n} differs ({} vs {} terms)",
                dp.term_count(),
                ch.term_count()
            ));
        }
    }
    let detail = if ok {
        "identical polynomials for n = 1..8".to_string()
    } else {
        detail.join("; ")
    };
    checks.push(Check::new("crossval", "subset-dp-equals-character", ok, detail));

    for g in catalog_order8()? {
        let t = group_determinant_with(&g, Method::SubsetDp, CoefficientMode::Exact, Default::default())?;
        let mut unit = vec![BigInt::from(0); 8];
        unit[g.identity()] = BigInt::from(1);
        let ones = vec![BigInt::from(1); 8];
        let ok = t.is_homogeneous_of_degree(8)
            && t.evaluate(&unit)? == BigInt::from(1)
            && t.evaluate(&ones)? == BigInt::from(0);
        checks.push(Check::new(
            "crossval",
            format!("evaluations-{}", g.name()),
            ok,
            format!(
                "{} terms, homogeneous of degree 8, 1 at the identity, 0 at all-ones",
                t.term_count()
            ),
        ));
    }
    Ok(checks)
}

pub fn theorems(runner: &mut Runner) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    const S: &str = "theorems";

    for p in [5u64, 7, 11, 13] {
        let row = runner.power_counts(&make_cyclic(p as usize)?, 1, MethodChoice::Auto)?;
        let terms = row.counts[0].map(|c| c.terms);
        let lambda = card_lambda(p, 1)?.value;
        let identity = n_theta_via_identity(p)?;
        let p2 = BigInt::from(p * p);
        let ok = terms.map(BigInt::from) == Some(lambda.clone())
            && lambda == identity
            && lambda.mod_floor(&p2) == BigInt::from(1);
        checks.push(Check::new(
            S,
            format!("prime-{p}-count"),
            ok,
            format!(
                "N = {terms:?}, |Lambda| = {lambda}, identity = {identity}, mod p^2 = {}",
                lambda.mod_floor(&p2)
            ),
        ));
    }

    let primes = primes_between(5, 499);
    let mut bad = Vec::new();
    for &p in &primes {
        if central_binom_mod(p, 3)? != 1 || central_binom_mod(p, 2)? != 1 {
            bad.push(p);
        }
    }
    checks.push(Check::new(
        S,
        "central-binomial-mod-p3",
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "C(2p-1, p-1) = 1 mod p^2 and p^3 for {} primes in [5, 499]",
                primes.len()
            )
        } else {
            format!("fails at {bad:?}")
        },
    ));

    let r = central_binom_mod(5, 4)?;
    checks.push(Check::new(S, "p5-mod-p4", r == 126, format!("C(9, 4) mod 625 = {r}")));

    let mut bad = Vec::new();
    for p in primes.iter().copied().chain([16843]) {
        let report = classify_prime(p)?;
        let harmonic_zero = harmonic_mod(p, 3)? == 0;
        if report.is_wolstenholme_prime != harmonic_zero
            || report.is_wolstenholme_prime != (report.n_theta_residue_p3 == 1)
        {
            bad.push(p);
        }
    }
    checks.push(Check::new(
        S,
        "criteria-equivalent",
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "binomial mod p^4, harmonic mod p^3 and N(Theta(C_p)) mod p^3 agree on {} primes",
                primes.len() + 1
            )
        } else {
            format!("disagree at {bad:?}")
        },
    ));

    let w = classify_prime(16843)?;
    let ok = w.residue_p4 == 1 && w.harmonic_residue_p3 == Some(0) && w.n_theta_residue_p3 == 1;
    checks.push(Check::new(
        S,
        "wolstenholme-16843",
        ok,
        format!(
            "residue mod p^4 = {}, harmonic mod p^3 = {:?}, N(Theta(C_p)) mod p^3 = {}",
            w.residue_p4, w.harmonic_residue_p3, w.n_theta_residue_p3
        ),
    ));

    let mut failed = Vec::new();
    let mut count = 0;
    for p in [5u64, 7, 11, 13] {
        for l in 1..=3 {
            for k in 1..=4 {
                count += 1;
                if !prime_power_congruence_report(p, l, k)?.all_hold() {
                    failed.push((p, l, k));
                }
            }
        }
    }
    checks.push(Check::new(
        S,
        "prime-power-congruence",
        failed.is_empty(),
        if failed.is_empty() {
            format!("{count} cases: |Lambda_(p^l)^k| = 1 mod p^2, telescoping sum and p^(3i) divisibility hold")
        } else {
            format!("fails at (p, l, k) = {failed:?}")
        },
    ));

    let mut integral = true;
    for n in 1..=200 {
        for k in 1..=10 {
            integral &= card_lambda(n, k).is_ok();
        }
    }
    checks.push(Check::new(
        S,
        "divisor-sum-integral",
        integral,
        "n divides the divisor sum for n <= 200, k <= 10",
    ));
    Ok(checks)
}

/// Pairs computed by default when the cache holds nothing larger.
const DEFAULT_PAIRS: [(usize, u32); 9] = [(1, 4), (2, 4), (3, 4), (4, 4), (5, 4), (6, 4), (7, 3), (8, 2), (9, 1)];

fn is_prime_power(n: u64) -> bool {
    if n == 1 {
        return true;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).expect("n > 1 has a divisor");
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// Inequality, equality and congruence between term counts and partition
/// cardinalities on the default pairs plus every cached cyclic power.
pub fn questions(runner: &mut Runner) -> Result<Vec<Check>> {
    const S: &str = "questions";
    let mut pairs: BTreeMap<(u64, u64), TermCount> = BTreeMap::new();
    for (n, k) in DEFAULT_PAIRS {
        let row = runner.power_counts(&make_cyclic(n)?, k, MethodChoice::Auto)?;
        for (j, c) in row.counts.iter().enumerate() {
            if let Some(c) = c {
                pairs.insert((n as u64, j as u64 + 1), *c);
            }
        }
    }
    if let Some(cache) = runner.cache() {
        for n in 1..=crate::poly::MAX_VARS {
            for mode in [CoefficientMode::Exact, CoefficientMode::ModPrime] {
                let name = format!("C{n}");
                for (k, _) in cache.cached_powers(&name, make_cyclic(n)?.gap_id(), mode)? {
                    let key = super::cache::CacheKey::new(&name, make_cyclic(n)?.gap_id(), k, mode);
                    if let Some(h) = cache.header(&key)? {
                        let entry = pairs.entry((n as u64, k as u64)).or_insert(h.count());
                        if !entry.is_exact() && h.count().is_exact() {
                            *entry = h.count();
                        }
                    }
                }
            }
        }
    }

    let mut le = Vec::new();
    let mut eq = Vec::new();
    let mut cong = Vec::new();
    for (&(n, k), count) in &pairs {
        let lambda = card_lambda(n, k)?.value;
        let terms = BigInt::from(count.terms);
        if terms > lambda {
            le.push(format!("n={n} k={k}: {terms} > {lambda}"));
        }
        if count.is_exact() && (terms == lambda) != is_prime_power(n) {
            eq.push(format!("n={n} k={k}: N = {terms}, |Lambda| = {lambda}"));
        }
        if (&lambda - &terms).mod_floor(&BigInt::from(n)) != BigInt::from(0) {
            cong.push(format!("n={n} k={k}: {terms} vs {lambda} mod {n}"));
        }
    }
    let summary = |v: &Vec<String>, ok: String| if v.is_empty() { ok } else { v.join("; ") };
    let n_pairs = pairs.len();
    let n_exact = pairs.values().filter(|c| c.is_exact()).count();
    let mut checks = vec![
        Check::new(
            S,
            "terms-at-most-lambda",
            le.is_empty(),
            summary(&le, format!("{n_pairs} pairs")),
        ),
        Check::new(
            S,
            "equality-iff-prime-power",
            eq.is_empty(),
            summary(&eq, format!("{n_exact} exact pairs")),
        ),
        Check::new(
            S,
            "congruent-mod-n",
            cong.is_empty(),
            summary(&cong, format!("{n_pairs} pairs")),
        ),
    ];

    let mut counts = Vec::new();
    for g in catalog_order8()? {
        let row = runner.power_counts(&g, 1, MethodChoice::Auto)?;
        let terms = row.counts[0].map(|c| c.terms).unwrap_or(u64::MAX);
        counts.push((g.name().to_string(), g.is_abelian(), terms));
    }
    checks.push(ordering_check("order-8", &counts));
    Ok(checks)
}

/// Cyclic group minimal, and every abelian count below every nonabelian one.
pub fn ordering_check(label: &str, counts: &[(String, bool, u64)]) -> Check {
    let cyclic = counts
        .iter()
        .find(|c| c.0.starts_with('C') && !c.0.contains('x') && !c.0.contains('^'));
    let min = counts.iter().map(|c| c.2).min();
    let max_abelian = counts.iter().filter(|c| c.1).map(|c| c.2).max();
    let min_nonabelian = counts.iter().filter(|c| !c.1).map(|c| c.2).min();
    let cyclic_min = cyclic.is_some_and(|c| Some(c.2) == min && counts.iter().filter(|d| d.2 == c.2).count() == 1);
    let split = match (max_abelian, min_nonabelian) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    };
    let listing: Vec<String> = counts.iter().map(|(n, _, t)| format!("{n}={t}")).collect();
    Check::new(
        "questions",
        format!("{label}-ordering"),
        cyclic_min && split,
        format!(
            "cyclic minimal: {cyclic_min}, abelian below nonabelian: {split} ({})",
            listing.join(", ")
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::runner::RunConfig;

    #[test]
    fn oracle_suite_passes() {
        assert!(all_passed(&oracle().unwrap()));
    }

    #[test]
    fn crossval_suite_passes() {
        assert!(all_passed(&crossval().unwrap()));
    }

    #[test]
    fn questions_suite_passes() {
        let mut r = Runner::new(RunConfig::default()).unwrap();
        let checks = questions(&mut r).unwrap();
        assert!(all_passed(&checks), "{}", render(&checks, OutputFormat::Human));
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<u64> = (1..=16).filter(|&n| is_prime_power(n)).collect();
        assert_eq!(pp, vec![1, 2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
    }

    #[test]
    fn ordering_detects_violations() {
        let ok = [("C8".to_string(), true, 10), ("D8".to_string(), false, 20)];
        assert!(ordering_check("t", &ok).passed);
        let bad = [("C8".to_string(), true, 30), ("D8".to_string(), false, 20)];
        assert!(!ordering_check("t", &bad).passed);
    }

    #[test]
    fn rendering() {
        let checks = vec![
            Check::new("s", "a", true, "ok"),
            Check::new("s", "b", false, "bad \"x\""),
        ];
        let h = render(&checks, OutputFormat::Human);
        assert!(h.contains("[PASS] s/a: ok"));
        assert!(h.contains("2 checks, 1 failed"));
        assert!(render(&checks, OutputFormat::Csv).contains("s,b,false,\"bad 'x'\""));
    }
}
