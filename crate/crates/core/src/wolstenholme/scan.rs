//! Range scans with a resumable checkpoint.
//!
//! The checkpoint is a single line `last_prime_processed count_found`,
//! rewritten through a temporary file and a rename after every chunk. A scan
//! restarted with the same checkpoint skips primes up to `last_prime_processed`
//! and starts its count from `count_found`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::{classify_prime_with, is_prime, PrimeReport};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub lo: u64,
    pub hi: u64,
    pub checkpoint: Option<PathBuf>,
    /// Primes per chunk; a checkpoint is written after each chunk.
    pub chunk: usize,
    /// The harmonic residue is also computed for primes `p` with
    /// `p % harmonic_stride == 1`; zero disables sampling.
    pub harmonic_stride: u64,
}

impl ScanConfig {
    pub fn new(lo: u64, hi: u64) -> Self {
        ScanConfig {
            lo,
            hi,
            checkpoint: None,
            chunk: 256,
            harmonic_stride: 97,
        }
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScanOutcome {
    /// Reports for the primes processed in this run, ascending.
    pub reports: Vec<PrimeReport>,
    /// Wolstenholme primes found in this run.
    pub wolstenholme: Vec<u64>,
    /// Last prime processed before this run, when resuming.
    pub resumed_after: Option<u64>,
    /// Total count including earlier runs recorded in the checkpoint.
    pub count_found: u64,
}

impl ScanOutcome {
    /// Primes whose harmonic and binomial criteria disagree.
    pub fn disagreements(&self) -> Vec<u64> {
        self.reports
            .iter()
            .filter(|r| r.criteria_agree() == Some(false))
            .map(|r| r.p)
            .collect()
    }
}

/// Reads a checkpoint, `None` if the file does not exist.
pub fn read_checkpoint(path: &Path) -> Result<Option<(u64, u64)>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut it = text.split_whitespace().map(str::parse::<u64>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(last)), Some(Ok(count)), None) => Ok(Some((last, count))),
        _ => Err(Error::InvalidArgument(format!(
            "malformed checkpoint {}",
            path.display()
        ))),
    }
}

pub fn write_checkpoint(path: &Path, last: u64, count: u64) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, format!("{last} {count}\n"))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn scan_range(config: &ScanConfig) -> Result<ScanOutcome> {
    if config.lo < 2 || config.hi < config.lo {
        return Err(Error::InvalidArgument(format!(
            "scan range [{}, {}] must satisfy 2 <= lo <= hi",
            config.lo, config.hi
        )));
    }
    let mut outcome = ScanOutcome::default();
    let mut start = config.lo;
    if let Some(path) = &config.checkpoint {
        if let Some((last, count)) = read_checkpoint(path)? {
            outcome.resumed_after = Some(last);
            outcome.count_found = count;
            start = start.max(last + 1);
        } else {
            // fail early on an unwritable location
            write_checkpoint(path, config.lo - 1, 0)?;
        }
    }
    let chunk = config.chunk.max(1);
    let started = Instant::now();
    let mut next = start;
    while next <= config.hi {
        let mut primes = Vec::with_capacity(chunk);
        while primes.len() < chunk && next <= config.hi {
            if is_prime(next) {
                primes.push(next);
            }
            next += 1;
        }
        let stride = config.harmonic_stride;
        let reports: Vec<PrimeReport> = primes
            .par_iter()
            .map(|&p| {
                let r = classify_prime_with(p, false)?;
                let sampled = stride > 0 && p % stride == 1;
                if p >= 5 && (r.is_wolstenholme_prime || sampled) {
                    classify_prime_with(p, true)
                } else {
                    Ok(r)
                }
            })
            .collect::<Result<_>>()?;
        for r in &reports {
            if r.is_wolstenholme_prime {
                outcome.wolstenholme.push(r.p);
                outcome.count_found += 1;
                log::info!("scan: Wolstenholme prime {}", r.p);
            }
        }
        if let Some(last) = reports.last() {
            if let Some(path) = &config.checkpoint {
                write_checkpoint(path, last.p, outcome.count_found)?;
            }
            log::info!(
                "scan: reached {} ({} found, {:.1}s)",
                last.p,
                outcome.count_found,
                started.elapsed().as_secs_f64()
            );
        }
        outcome.reports.extend(reports);
    }
    if let Some(path) = &config.checkpoint {
        let last = config.hi.max(outcome.resumed_after.unwrap_or(0));
        write_checkpoint(path, last, outcome.count_found)?;
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_range() {
        let out = scan_range(&ScanConfig::new(2, 100)).unwrap();
        assert!(out.wolstenholme.is_empty());
        assert_eq!(out.reports.len(), 25);
        assert!(out
            .reports
            .iter()
            .filter(|r| r.p >= 5)
            .all(|r| r.satisfies_wolstenholme_theorem));
        assert!(out.disagreements().is_empty());
    }

    #[test]
    fn finds_known_primes() {
        assert_eq!(
            scan_range(&ScanConfig::new(16800, 16900)).unwrap().wolstenholme,
            vec![16843]
        );
        let out = scan_range(&ScanConfig::new(2124600, 2124700)).unwrap();
        assert_eq!(out.wolstenholme, vec![2124679]);
        assert!(out.disagreements().is_empty());
    }

    #[test]
    fn chunking_does_not_change_output() {
        let mut a = ScanConfig::new(2, 3000);
        a.chunk = 7;
        let mut b = ScanConfig::new(2, 3000);
        b.chunk = 1000;
        assert_eq!(scan_range(&a).unwrap().reports, scan_range(&b).unwrap().reports);
    }

    #[test]
    fn checkpoint_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.ckpt");
        let first = scan_range(&ScanConfig::new(16000, 17000).with_checkpoint(&path)).unwrap();
        assert_eq!(first.count_found, 1);
        assert_eq!(read_checkpoint(&path).unwrap(), Some((17000, 1)));
        // extending the range resumes after the recorded prime
        let second = scan_range(&ScanConfig::new(16000, 17100).with_checkpoint(&path)).unwrap();
        assert_eq!(second.resumed_after, Some(17000));
        assert_eq!(second.count_found, 1);
        assert!(second.reports.iter().all(|r| r.p > 17000));
    }

    #[test]
    fn invalid_inputs() {
        assert!(scan_range(&ScanConfig::new(1, 10)).is_err());
        assert!(scan_range(&ScanConfig::new(10, 5)).is_err());
        let cfg = ScanConfig::new(2, 10).with_checkpoint("/nonexistent-dir/ckpt");
        assert!(matches!(scan_range(&cfg), Err(Error::Io(_))));
    }
}
