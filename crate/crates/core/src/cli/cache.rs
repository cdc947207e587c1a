//! On-disk polynomial cache keyed by group, power and coefficient mode.
//!
//! Each entry `<key>.gdp` has a sibling `<key>.lock`. Writers hold an
//! exclusive lock while writing a temporary file and renaming it into place;
//! readers hold a shared lock.

use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};

use crate::poly::{self, CacheHeader, CoefficientMode, SparsePoly};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub group: String,
    pub gap_id: Option<(u32, u32)>,
    pub k: u32,
    pub mode: CoefficientMode,
}

impl CacheKey {
    pub fn new(group: &str, gap_id: Option<(u32, u32)>, k: u32, mode: CoefficientMode) -> Self {
        CacheKey {
            group: group.to_string(),
            gap_id,
            k,
            mode,
        }
    }

    /// File stem; group names are reduced to `[A-Za-z0-9]` plus escapes.
    pub fn stem(&self) -> String {
        let mut name = String::new();
        for ch in self.group.chars() {
            match ch {
                'a'..='z' | 'A'..='Z' | '0'..='9' => name.push(ch),
                '^' => name.push_str("-p"),
                ':' => name.push_str("-s"),
                _ => name.push_str(&format!("-u{:x}", ch as u32)),
            }
        }
        let gap = match self.gap_id {
            Some((o, i)) => format!("{o}.{i}"),
            None => "none".into(),
        };
        format!("{name}_{gap}_k{}_{}", self.k, self.mode)
    }
}

#[derive(Clone, Debug)]
pub struct PolyCache {
    dir: PathBuf,
}

impl PolyCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(PolyCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.gdp", key.stem()))
    }

    fn lock_file(&self, key: &CacheKey) -> Result<File> {
        let path = self.dir.join(format!("{}.lock", key.stem()));
        Ok(OpenOptions::new().create(true).truncate(false).write(true).open(path)?)
    }

    /// Header of a checksum-verified entry, or `None` if absent or corrupt.
    pub fn header(&self, key: &CacheKey) -> Result<Option<CacheHeader>> {
        let path = self.path(key);
        if !path.exists() {
            return Ok(None);
        }
        let lock = self.lock_file(key)?;
        lock.lock_shared()?;
        let header = poly::verify_file(&path).ok().filter(|h| h.mode == key.mode);
        lock.unlock()?;
        Ok(header)
    }

    /// Loads and fully checks an entry; a corrupt entry reads as absent.
    pub fn load(&self, key: &CacheKey) -> Result<Option<SparsePoly>> {
        let path = self.path(key);
        if !path.exists() {
            return Ok(None);
        }
        let lock = self.lock_file(key)?;
        lock.lock_shared()?;
        let poly = match poly::read_file(&path) {
            Ok(p) if p.mode() == key.mode => Some(p),
            Ok(_) => None,
            Err(e) => {
                log::warn!("ignoring cache entry {}: {e}", path.display());
                None
            }
        };
        lock.unlock()?;
        Ok(poly)
    }

    pub fn store(&self, key: &CacheKey, poly: &SparsePoly) -> Result<()> {
        let path = self.path(key);
        let tmp = self.dir.join(format!("{}.gdp.tmp{}", key.stem(), std::process::id()));
        let lock = self.lock_file(key)?;
        lock.lock()?;
        let written = poly::write_file(poly, &tmp).and_then(|_| fs::rename(&tmp, &path).map_err(Into::into));
        if written.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        lock.unlock()?;
        written
    }

    /// Keys of all readable entries for one group and mode.
    pub fn cached_powers(
        &self,
        group: &str,
        gap_id: Option<(u32, u32)>,
        mode: CoefficientMode,
    ) -> Result<Vec<(u32, u64)>> {
        let mut out = Vec::new();
        let prefix = CacheKey::new(group, gap_id, 0, mode).stem();
        let prefix = prefix.split("_k").next().expect("stem has a power field").to_string() + "_k";
        for entry in fs::read_dir(&self.dir)? {
            let name = entry?.file_name().to_string_lossy().into_owned();
            let Some(rest) = name.strip_prefix(&prefix).and_then(|r| r.strip_suffix(".gdp")) else {
                continue;
            };
            let Some(k) = rest
                .strip_suffix(&format!("_{mode}"))
                .and_then(|k| k.parse::<u32>().ok())
            else {
                continue;
            };
            if let Some(h) = self.header(&CacheKey::new(group, gap_id, k, mode))? {
                out.push((k, h.terms));
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    #[test]
    fn stems_are_distinct_and_safe() {
        let a = CacheKey::new("Q8:C2", Some((16, 13)), 1, CoefficientMode::ModPrime).stem();
        let b = CacheKey::new("C2^4", Some((16, 14)), 2, CoefficientMode::Exact).stem();
        assert_eq!(a, "Q8-sC2_16.13_k1_modprime");
        assert_eq!(b, "C2-p4_16.14_k2_exact");
        assert!(a.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)));
    }

    #[test]
    fn store_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PolyCache::open(dir.path()).unwrap();
        let p = SparsePoly::from_terms(
            2,
            vec![(vec![2u8, 0], BigInt::from(1)), (vec![0u8, 2], BigInt::from(-1))],
        )
        .unwrap();
        let key = CacheKey::new("C2", None, 1, CoefficientMode::Exact);
        assert!(cache.load(&key).unwrap().is_none());
        cache.store(&key, &p).unwrap();
        assert_eq!(cache.load(&key).unwrap(), Some(p));
        assert_eq!(cache.header(&key).unwrap().unwrap().terms, 2);
        assert_eq!(
            cache.cached_powers("C2", None, CoefficientMode::Exact).unwrap(),
            vec![(1, 2)]
        );
        assert!(cache
            .cached_powers("C2", None, CoefficientMode::ModPrime)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn corrupt_entries_read_as_absent() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PolyCache::open(dir.path()).unwrap();
        let key = CacheKey::new("C3", None, 1, CoefficientMode::Exact);
        fs::write(cache.path(&key), b"GDETjunk").unwrap();
        assert!(cache.load(&key).unwrap().is_none());
    }
}
