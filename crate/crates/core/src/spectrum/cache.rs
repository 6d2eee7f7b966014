//! Append-only text cache of remainder records.
//!
//! One file per `(l, r, precision)`. Each line is
//! `u N_II smooth E_exact checksum`, reals with 17 significant digits and the
//! checksum the first 16 hex digits of SHA-256 over the four fields. Lines
//! whose checksum does not match are ignored on load.

use super::counting::count_type_ii;
use super::manifold::HeisenbergManifold;
use super::remainder::{e_exact, e_exact_with, smooth_type_ii, Precision};
use crate::arithmetic::BigCount;
use crate::error::{Error, Result};
use crate::numeric::fmt_real;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq)]
pub struct CacheRecord {
    pub u: f64,
    pub n_ii: BigCount,
    pub smooth: f64,
    pub e_exact: f64,
}

fn checksum(body: &str) -> String {
    let digest = Sha256::digest(body.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

impl CacheRecord {
    pub fn compute(m: &HeisenbergManifold, u: f64, precision: Precision) -> Self {
        let e = match precision {
            Precision::Extended => e_exact(m, u),
            Precision::Fast => e_exact_with(m, u, Precision::Fast),
        };
        Self {
            u,
            n_ii: count_type_ii(m, u),
            smooth: smooth_type_ii(m, u),
            e_exact: e,
        }
    }

    pub fn to_line(&self) -> String {
        let body = format!(
            "{} {} {} {}",
            fmt_real(self.u),
            self.n_ii,
            fmt_real(self.smooth),
            fmt_real(self.e_exact)
        );
        let sum = checksum(&body);
        format!("{body} {sum}")
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let (body, sum) = line
            .trim_end()
            .rsplit_once(' ')
            .ok_or_else(|| Error::Parse(format!("cache line without checksum: {line:?}")))?;
        if checksum(body) != sum {
            return Err(Error::Parse(format!("cache checksum mismatch: {line:?}")));
        }
        let fields: Vec<&str> = body.split(' ').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("cache line needs 4 fields: {line:?}")));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        Ok(Self {
            u: real(fields[0])?,
            n_ii: fields[1].parse()?,
            smooth: real(fields[2])?,
            e_exact: real(fields[3])?,
        })
    }
}

/// Records for one manifold and precision, backed by a file.
#[derive(Debug)]
pub struct RemainderCache {
    path: PathBuf,
    manifold: HeisenbergManifold,
    precision: Precision,
    records: BTreeMap<u64, CacheRecord>,
    rejected: usize,
}

impl RemainderCache {
    pub fn file_name(m: &HeisenbergManifold, precision: Precision) -> String {
        let r: Vec<String> = m.r().iter().map(|x| x.to_string()).collect();
        let p = match precision {
            Precision::Fast => "fast",
            Precision::Extended => "extended",
        };
        format!("remainder_l{}_r{}_{p}.txt", m.ell(), r.join("-"))
    }

    /// Loads (or starts) the cache file for `m` inside `dir`.
    pub fn open(dir: &Path, m: &HeisenbergManifold, precision: Precision) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(Self::file_name(m, precision));
        let mut cache = Self {
            path,
            manifold: m.clone(),
            precision,
            records: BTreeMap::new(),
            rejected: 0,
        };
        if cache.path.exists() {
            let reader = BufReader::new(File::open(&cache.path)?);
            for line in reader.lines() {
                let line = line?;
                if line.starts_with('#') || line.trim().is_empty() {
                    continue;
                }
                match CacheRecord::parse_line(&line) {
                    Ok(rec) => {
                        cache.records.insert(rec.u.to_bits(), rec);
                    }
                    Err(_) => cache.rejected += 1,
                }
            }
        }
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Lines dropped on load for a bad checksum or format.
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    pub fn get(&self, u: f64) -> Option<&CacheRecord> {
        self.records.get(&u.to_bits())
    }

    /// Appends records not already present.
    pub fn append(&mut self, records: &[CacheRecord]) -> Result<()> {
        let fresh = !self.path.exists();
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        if fresh {
            let r: Vec<String> = self.manifold.r().iter().map(|x| x.to_string()).collect();
            writeln!(
                file,
                "# weyllab remainder cache ell={} r={} precision={:?}",
                self.manifold.ell(),
                r.join(","),
                self.precision
            )?;
        }
        for rec in records {
            if self.records.contains_key(&rec.u.to_bits()) {
                continue;
            }
            writeln!(file, "{}", rec.to_line())?;
            self.records.insert(rec.u.to_bits(), rec.clone());
        }
        Ok(())
    }

    /// Cached record for `u`, computing and appending it when absent.
    pub fn get_or_compute(&mut self, u: f64) -> Result<CacheRecord> {
        if let Some(r) = self.get(u) {
            return Ok(r.clone());
        }
        let rec = CacheRecord::compute(&self.manifold, u, self.precision);
        self.append(std::slice::from_ref(&rec))?;
        Ok(rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_round_trip() {
        let m = HeisenbergManifold::standard(2).unwrap();
        let rec = CacheRecord::compute(&m, 7.25, Precision::Extended);
        let back = CacheRecord::parse_line(&rec.to_line()).unwrap();
        assert_eq!(rec, back);
        let tampered = rec.to_line().replacen(' ', "  ", 1);
        assert!(CacheRecord::parse_line(&tampered).is_err());
    }

    #[test]
    fn append_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let m = HeisenbergManifold::new(2, vec![1, 2]).unwrap();
        let mut cache = RemainderCache::open(dir.path(), &m, Precision::Extended).unwrap();
        assert!(cache.is_empty());
        let a = cache.get_or_compute(10.0).unwrap();
        cache.get_or_compute(10.5).unwrap();
        cache.get_or_compute(10.0).unwrap();
        assert_eq!(cache.len(), 2);
        // a corrupt line is skipped, not fatal
        let mut f = OpenOptions::new().append(true).open(cache.path()).unwrap();
        writeln!(f, "1 2 3 4 deadbeefdeadbeef").unwrap();
        let reloaded = RemainderCache::open(dir.path(), &m, Precision::Extended).unwrap();
        assert_eq!(reloaded.len(), 2);
        assert_eq!(reloaded.rejected(), 1);
        assert_eq!(reloaded.get(10.0), Some(&a));
    }
}
