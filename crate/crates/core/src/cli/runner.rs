//! Cached computation of determinant powers and assembly of output tables.

use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;

use super::cache::{CacheKey, PolyCache};
use super::table::{Cell, OutputFormat, Row, Table};
use crate::det::{group_determinant_with, Method};
use crate::group::{make_cyclic, FiniteGroup};
use crate::partitions::{card_lambda, enumerate_lambda, CountMethod};
use crate::poly::{CoefficientMode, MemoryBudget, SparsePoly, TermCount};
use crate::{Error, Result};

/// Smallest accepted memory budget.
pub const MIN_BUDGET: u64 = 64 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum ModeChoice {
    /// Exact below order 14, modular from order 14 on.
    #[default]
    Auto,
    Exact,
    Modprime,
}

impl ModeChoice {
    pub fn resolve(self, order: usize) -> CoefficientMode {
        match self {
            ModeChoice::Auto => CoefficientMode::default_for_order(order),
            ModeChoice::Exact => CoefficientMode::Exact,
            ModeChoice::Modprime => CoefficientMode::ModPrime,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Character,
    SubsetDp,
}

impl MethodChoice {
    pub fn resolve(self, group: &FiniteGroup) -> Method {
        match self {
            MethodChoice::Auto => Method::for_group(group),
            MethodChoice::Character => Method::Character,
            MethodChoice::SubsetDp => Method::SubsetDp,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: ModeChoice,
    pub budget: MemoryBudget,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: ModeChoice::Auto,
            budget: MemoryBudget::default(),
            cache_dir: None,
            format: OutputFormat::Human,
            jobs: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget.bytes() < MIN_BUDGET {
            return Err(Error::InvalidArgument(format!(
                "budget of {} bytes is below the 64 MiB minimum",
                self.budget.bytes()
            )));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("--jobs must be positive".into()));
        }
        Ok(())
    }
}

/// Work counters; a fully cached request performs no multiplications.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub expansions: u64,
    pub multiplications: u64,
    pub cache_hits: u64,
    pub cache_writes: u64,
}

/// Term counts of `Theta(G)^1 ..= Theta(G)^k_max`.
#[derive(Clone, Debug)]
pub struct PowerCounts {
    pub group: String,
    pub order: usize,
    pub gap_id: Option<(u32, u32)>,
    pub method: Method,
    pub mode: CoefficientMode,
    /// Entry `j` holds the count for exponent `j + 1`; `None` past a budget stop.
    pub counts: Vec<Option<TermCount>>,
    /// The error that ended the row early.
    pub stopped: Option<String>,
}

impl PowerCounts {
    pub fn cells(&self) -> Vec<Cell> {
        self.counts
            .iter()
            .map(|c| match c {
                Some(tc) => Cell::Value {
                    value: tc.terms.to_string(),
                    exact: tc.is_exact(),
                },
                None => Cell::Missing,
            })
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.stopped.is_none()
    }

    /// Largest failure bound among Monte Carlo counts.
    pub fn max_failure_bound(&self) -> Option<f64> {
        self.counts
            .iter()
            .flatten()
            .filter_map(|c| c.failure_bound)
            .reduce(f64::max)
    }
}

pub struct Runner {
    config: RunConfig,
    cache: Option<PolyCache>,
    stats: RunStats,
}

impl Runner {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let cache = config.cache_dir.as_ref().map(PolyCache::open).transpose()?;
        Ok(Runner {
            config,
            cache,
            stats: RunStats::default(),
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn cache(&self) -> Option<&PolyCache> {
        self.cache.as_ref()
    }

    pub fn stats(&self) -> RunStats {
        self.stats
    }

    /// Counts for exponents `1..=k_max`, resuming from the longest cached
    /// prefix. A budget stop is not an error: the remaining entries are `None`.
    pub fn power_counts(&mut self, group: &FiniteGroup, k_max: u32, method: MethodChoice) -> Result<PowerCounts> {
        if k_max == 0 {
            return Err(Error::InvalidArgument("--k-max must be at least 1".into()));
        }
        let mode = self.config.mode.resolve(group.order());
        let method = method.resolve(group);
        let key = |k: u32| CacheKey::new(group.name(), group.gap_id(), k, mode);
        let mut out = PowerCounts {
            group: group.name().to_string(),
            order: group.order(),
            gap_id: group.gap_id(),
            method,
            mode,
            counts: Vec::with_capacity(k_max as usize),
            stopped: None,
        };

        let mut cached = 0;
        if let Some(cache) = &self.cache {
            while cached < k_max {
                match cache.header(&key(cached + 1))? {
                    Some(h) => {
                        out.counts.push(Some(h.count()));
                        cached += 1;
                    }
                    None => break,
                }
            }
        }
        self.stats.cache_hits += u64::from(cached);
        if cached == k_max {
            return Ok(out);
        }

        let started = Instant::now();
        let budget = self.config.budget;
        let cache = self.cache.clone();
        let loaded = |k: u32| -> Result<Option<SparsePoly>> {
            match &cache {
                Some(cache) if k >= 1 => cache.load(&key(k)),
                _ => Ok(None),
            }
        };
        let base = match loaded(1)? {
            Some(p) => p,
            None => match self.expand(group, method, mode, budget) {
                Ok(p) => p,
                Err(e @ Error::BudgetExceeded { .. }) => return Ok(self.stop(out, k_max, e)),
                Err(e) => return Err(e),
            },
        };
        let mut acc = match cached {
            0 | 1 => base.clone(),
            c => match loaded(c)? {
                Some(p) => p,
                None => {
                    // entry vanished between header and load; recompute the row
                    out.counts.clear();
                    cached = 0;
                    base.clone()
                }
            },
        };
        if cached == 0 {
            self.record(group, &key(1), &acc, &mut out, started)?;
            cached = 1;
        }
        for k in cached + 1..=k_max {
            match acc.mul(&base, budget) {
                Ok(next) => {
                    self.stats.multiplications += 1;
                    acc = next;
                }
                Err(e @ Error::BudgetExceeded { .. }) => return Ok(self.stop(out, k_max, e)),
                Err(e) => return Err(e),
            }
            self.record(group, &key(k), &acc, &mut out, started)?;
        }
        Ok(out)
    }

    fn expand(
        &mut self,
        group: &FiniteGroup,
        method: Method,
        mode: CoefficientMode,
        budget: MemoryBudget,
    ) -> Result<SparsePoly> {
        self.stats.expansions += 1;
        group_determinant_with(group, method, mode, budget)
    }

    fn record(
        &mut self,
        group: &FiniteGroup,
        key: &CacheKey,
        poly: &SparsePoly,
        out: &mut PowerCounts,
        started: Instant,
    ) -> Result<()> {
        let count = poly.count();
        log::info!(
            "{} k={}: {} terms ({:.2?} elapsed)",
            group.name(),
            key.k,
            count.terms,
            started.elapsed()
        );
        out.counts.push(Some(count));
        if let Some(cache) = &self.cache {
            cache.store(key, poly)?;
            self.stats.cache_writes += 1;
        }
        Ok(())
    }

    fn stop(&self, mut out: PowerCounts, k_max: u32, e: Error) -> PowerCounts {
        log::warn!("{}: stopped after exponent {}: {e}", out.group, out.counts.len());
        out.counts.resize(k_max as usize, None);
        out.stopped = Some(e.to_string());
        out
    }

    /// Rows `N(Theta(C_n)^k)` for each `n` in `ns`.
    pub fn terms_table(&mut self, ns: &[usize], k_max: u32) -> Result<(Table, Vec<PowerCounts>)> {
        let mut table = Table::new("N(Theta(C_n)^k)");
        let mut rows = Vec::with_capacity(ns.len());
        for &n in ns {
            let group = make_cyclic(n)?;
            let counts = self.power_counts(&group, k_max, MethodChoice::Auto)?;
            table.rows.push(Row {
                n: n as u64,
                cells: counts.cells(),
            });
            if let Some(bound) = counts.max_failure_bound() {
                table
                    .notes
                    .push(format!("n={n}: Monte Carlo failure probability <= {bound:.3e}"));
            }
            rows.push(counts);
        }
        Ok((table, rows))
    }
}

/// Rows `|Lambda_n^k|` for `n_min..=n_max`.
pub fn partitions_table(n_min: u64, n_max: u64, k_max: u64, method: CountMethod) -> Result<Table> {
    if n_min == 0 || n_max < n_min || k_max == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n-min <= n-max and k-max >= 1 (got {n_min}, {n_max}, {k_max})"
        )));
    }
    let mut table = Table::new("|Lambda_n^k|");
    table.string_values = true;
    table.method = Some(method.to_string());
    for n in n_min..=n_max {
        let mut cells = Vec::with_capacity(k_max as usize);
        for k in 1..=k_max {
            let count = match method {
                CountMethod::Formula => card_lambda(n, k)?,
                CountMethod::Enumeration => enumerate_lambda(n, k)?,
            };
            cells.push(Cell::exact(count.value));
        }
        table.rows.push(Row { n, cells });
    }
    Ok(table)
}

/// Parses `5`, `1-7`, `1..=7` or `3,5,7` into a list of orders.
pub fn parse_orders(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("cannot parse order list `{spec}`"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let range = part
            .split_once("..=")
            .or_else(|| part.split_once(".."))
            .or_else(|| part.split_once('-'));
        match range {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    Ok(out)
}

/// Parses a byte count with an optional `K`, `M`, `G`, `T` suffix (binary
/// multiples; `KiB`, `MB` and similar spellings are accepted).
pub fn parse_bytes(text: &str) -> Result<u64> {
    let t = text.trim();
    let split = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
    let (digits, suffix) = t.split_at(split);
    let value: u64 = digits
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("cannot parse byte count `{text}`")))?;
    let shift = match suffix
        .trim()
        .to_ascii_lowercase()
        .trim_end_matches("ib")
        .trim_end_matches('b')
    {
        "" => 0,
        "k" => 10,
        "m" => 20,
        "g" => 30,
        "t" => 40,
        _ => return Err(Error::InvalidArgument(format!("unknown byte suffix in `{text}`"))),
    };
    value
        .checked_mul(1 << shift)
        .ok_or_else(|| Error::InvalidArgument(format!("byte count `{text}` overflows")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn runner(dir: Option<&std::path::Path>) -> Runner {
        Runner::new(RunConfig {
            cache_dir: dir.map(Into::into),
            ..RunConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn order_lists() {
        assert_eq!(parse_orders("5").unwrap(), vec![5]);
        assert_eq!(parse_orders("1-3,7").unwrap(), vec![1, 2, 3, 7]);
        assert_eq!(parse_orders("2..=4").unwrap(), vec![2, 3, 4]);
        assert!(parse_orders("0").is_err());
        assert!(parse_orders("4-2").is_err());
        assert!(parse_orders("x").is_err());
    }

    #[test]
    fn byte_counts() {
        assert_eq!(parse_bytes("1024").unwrap(), 1024);
        assert_eq!(parse_bytes("64M").unwrap(), 64 << 20);
        assert_eq!(parse_bytes("8GiB").unwrap(), 8 << 30);
        assert_eq!(parse_bytes("2 gb").unwrap(), 2 << 30);
        assert!(parse_bytes("12Q").is_err());
        assert!(parse_bytes("").is_err());
    }

    #[test]
    fn small_budget_rejected() {
        let config = RunConfig {
            budget: MemoryBudget::new(1 << 20),
            ..RunConfig::default()
        };
        assert!(matches!(Runner::new(config), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn row_five() {
        let (table, _) = runner(None).terms_table(&[5], 4).unwrap();
        assert_eq!(table.csv(), "n\\k,1,2,3,4\n5,26,201,776,2126\n");
    }

    #[test]
    fn warm_cache_skips_multiplication() {
        let dir = tempfile::tempdir().unwrap();
        let mut cold = runner(Some(dir.path()));
        let (first, _) = cold.terms_table(&[4, 5], 3).unwrap();
        assert_eq!(cold.stats().multiplications, 4);
        assert_eq!(cold.stats().cache_writes, 6);

        let mut warm = runner(Some(dir.path()));
        let (second, _) = warm.terms_table(&[4, 5], 3).unwrap();
        assert_eq!(first, second);
        assert_eq!(warm.stats().multiplications, 0);
        assert_eq!(warm.stats().expansions, 0);
        assert_eq!(warm.stats().cache_hits, 6);

        // extending the row continues from the cached k = 3
        let mut ext = runner(Some(dir.path()));
        let (longer, _) = ext.terms_table(&[5], 5).unwrap();
        assert_eq!(ext.stats().multiplications, 2);
        assert_eq!(ext.stats().expansions, 0);
        assert_eq!(longer.rows[0].cells[4], Cell::exact(4751));
    }

    #[test]
    fn budget_stop_marks_missing() {
        let config = RunConfig {
            budget: MemoryBudget::new(MIN_BUDGET),
            ..RunConfig::default()
        };
        let mut r = Runner::new(config).unwrap();
        let (table, rows) = r.terms_table(&[7], 10).unwrap();
        assert!(table.has_missing());
        assert!(!rows[0].is_complete());
        assert_eq!(rows[0].counts[0].unwrap().terms, 246);
    }

    #[test]
    fn partition_rows() {
        let t = partitions_table(5, 6, 2, CountMethod::Formula).unwrap();
        assert_eq!(t.csv(), "n\\k,1,2\n5,26,201\n6,80,1038\n");
        let e = partitions_table(5, 6, 2, CountMethod::Enumeration).unwrap();
        assert_eq!(e.csv(), t.csv());
        assert!(partitions_table(3, 2, 1, CountMethod::Formula).is_err());
    }
}
