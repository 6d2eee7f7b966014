//! Run configuration: flags, then `WEYLLAB_*` environment variables, then a
//! `key = value` file, then defaults.

use crate::error::{Error, Result};
use crate::spectrum::{parse_r_vector, HeisenbergManifold, Precision};
use clap::{Args, ValueEnum};
use std::collections::BTreeMap;
use std::path::PathBuf;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ELL: u32 = 2;
pub const ENV_PREFIX: &str = "WEYLLAB_";

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::Parse(format!("format must be csv|json, got {s:?}"))),
        }
    }
}

/// Options shared by every command. All optional so that unset flags fall
/// through to the environment and the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Heisenberg dimension parameter l (manifold dimension 2l+1).
    #[arg(long, global = true)]
    pub ell: Option<u32>,
    /// Divisor chain r_1,...,r_l (default all ones).
    #[arg(long, global = true)]
    pub r: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_parser = ["fast", "extended"])]
    pub precision: Option<String>,
    /// Report destination (default stdout).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub ell: u32,
    pub r: Vec<u64>,
    pub seed: u64,
    pub precision: Precision,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", i + 1)))?;
        map.insert(k.trim().to_ascii_lowercase().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| Error::Parse(format!("{key} = {v:?}: {e}")))
}

impl RunConfig {
    /// Merges the layers. `env` maps full variable names (`WEYLLAB_ELL`).
    pub fn resolve(flags: &CommonArgs, env: &BTreeMap<String, String>) -> Result<Self> {
        let file_path = flags
            .config
            .clone()
            .or_else(|| env.get("WEYLLAB_CONFIG").map(PathBuf::from));
        let file = match file_path {
            Some(p) => parse_config_text(&std::fs::read_to_string(&p).map_err(|e| {
                Error::Parse(format!("cannot read config {}: {e}", p.display()))
            })?)?,
            None => BTreeMap::new(),
        };
        let layered = |key: &str| -> Option<String> {
            env.get(&format!("{ENV_PREFIX}{}", key.to_ascii_uppercase()))
                .cloned()
                .or_else(|| file.get(key).cloned())
        };

        let ell = match flags.ell {
            Some(v) => v,
            None => layered("ell").map(|v| parse("ell", &v)).transpose()?.unwrap_or(DEFAULT_ELL),
        };
        let r = match flags.r.clone().or_else(|| layered("r")) {
            Some(s) => parse_r_vector(&s)?,
            None => vec![1; ell as usize],
        };
        HeisenbergManifold::new(ell, r.clone())?;
        let seed = match flags.seed {
            Some(v) => v,
            None => layered("seed").map(|v| parse("seed", &v)).transpose()?.unwrap_or(DEFAULT_SEED),
        };
        let precision = match flags.precision.clone().or_else(|| layered("precision")) {
            Some(s) => s.parse()?,
            None => Precision::Extended,
        };
        let format = match flags.format {
            Some(f) => f,
            None => layered("format").map(|v| v.parse()).transpose()?.unwrap_or_default(),
        };
        let threads = match flags.threads {
            Some(v) => Some(v),
            None => layered("threads").map(|v| parse("threads", &v)).transpose()?,
        };
        let output = flags.output.clone().or_else(|| layered("output").map(PathBuf::from));
        let cache_dir = flags.cache_dir.clone().or_else(|| layered("cache_dir").map(PathBuf::from));
        Ok(Self {
            ell,
            r,
            seed,
            precision,
            output,
            format,
            threads: threads.filter(|&t| t > 0),
            cache_dir,
        })
    }

    pub fn manifold(&self) -> Result<HeisenbergManifold> {
        HeisenbergManifold::new(self.ell, self.r.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn env(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(&CommonArgs::default(), &BTreeMap::new()).unwrap();
        assert_eq!(c.ell, 2);
        assert_eq!(c.r, vec![1, 1]);
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.precision, Precision::Extended);
    }

    #[test]
    fn precedence_flags_env_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# sample\nseed = 7\nthreads = 3\nformat = json\ncache-dir = /tmp/a").unwrap();
        let e = env(&[("WEYLLAB_SEED", "8"), ("WEYLLAB_CACHE_DIR", "/tmp/b")]);
        let flags = CommonArgs {
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        let c = RunConfig::resolve(&flags, &e).unwrap();
        assert_eq!(c.seed, 8);
        assert_eq!(c.threads, Some(3));
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.cache_dir, Some(PathBuf::from("/tmp/b")));
        let flags = CommonArgs {
            seed: Some(9),
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve(&flags, &e).unwrap().seed, 9);
    }

    #[test]
    fn rejects_bad_chain_and_values() {
        let flags = CommonArgs {
            r: Some("2,3".into()),
            ..Default::default()
        };
        let err = RunConfig::resolve(&flags, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, Error::InvalidManifold(_)));
        assert!(RunConfig::resolve(&CommonArgs::default(), &env(&[("WEYLLAB_ELL", "x")])).is_err());
        assert!(parse_config_text("novalue").is_err());
    }
}
