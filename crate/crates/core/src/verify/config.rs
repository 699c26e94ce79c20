//! Run configuration: defaults, then a key-value file, then flag overrides.
//!
//! ```text
//! precision_digits = 50
//! sieve_limit = 10000000
//! segment_size = 4194304
//! threads = 4
//! checkpoints = "log:16"        # or "4,10,100,1000"
//! cache_dir = "cache"
//! output_dir = "out"
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::precision::{Precision, DEFAULT_DIGITS};
use crate::sieve::{SieveConfig, DEFAULT_SEGMENT_SIZE, MAX_LIMIT};

pub const DEFAULT_LIMIT: u64 = 10_000_000;
pub const DEFAULT_POINTS_PER_DECADE: u32 = 16;
pub const MIN_POINTS_PER_DECADE: u32 = 4;
/// Grids denser than this buy nothing and bloat every output file.
pub const MAX_POINTS_PER_DECADE: u32 = 1000;
pub const MAX_DIGITS: u32 = 1000;
pub const MAX_EXPLICIT_CHECKPOINTS: usize = 100_000;
/// Points that individual checks hinge on; always added to a log grid.
pub const ANCHOR_POINTS: [u64; 7] = [4, 10, 11, 227, 10_372, 2_278_383, 100_000_000];
/// Every integer up to here is a checkpoint of a log grid.
pub const DENSE_UP_TO: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckpointPolicy {
    LogGrid { points_per_decade: u32 },
    Explicit(Vec<u64>),
}

impl fmt::Display for CheckpointPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckpointPolicy::LogGrid { points_per_decade } => write!(f, "log:{points_per_decade}"),
            CheckpointPolicy::Explicit(v) => {
                let s: Vec<String> = v.iter().map(u64::to_string).collect();
                f.write_str(&s.join(","))
            }
        }
    }
}

impl FromStr for CheckpointPolicy {
    type Err = Error;

    /// `log:<points per decade>` or a comma-separated list of integers.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix("log:") {
            let points_per_decade = n
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad points per decade {n:?}")))?;
            return Ok(CheckpointPolicy::LogGrid { points_per_decade });
        }
        let mut v = Vec::new();
        for part in s.split(',') {
            if v.len() == MAX_EXPLICIT_CHECKPOINTS {
                return Err(Error::Config(format!(
                    "at most {MAX_EXPLICIT_CHECKPOINTS} explicit checkpoints"
                )));
            }
            let x = part
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad checkpoint {part:?}")))?;
            v.push(x);
        }
        Ok(CheckpointPolicy::Explicit(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub precision_digits: u32,
    pub sieve_limit: u64,
    pub segment_size: u64,
    pub threads: usize,
    pub checkpoint_policy: CheckpointPolicy,
    pub cache_dir: PathBuf,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_digits: DEFAULT_DIGITS,
            sieve_limit: DEFAULT_LIMIT,
            segment_size: DEFAULT_SEGMENT_SIZE,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            checkpoint_policy: CheckpointPolicy::LogGrid {
                points_per_decade: DEFAULT_POINTS_PER_DECADE,
            },
            cache_dir: PathBuf::from("cache"),
            output_dir: PathBuf::from("out"),
        }
    }
}

/// A partial configuration; every field left `None` keeps the lower layer.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub precision_digits: Option<u32>,
    pub sieve_limit: Option<u64>,
    pub segment_size: Option<u64>,
    pub threads: Option<usize>,
    pub checkpoints: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

impl ConfigLayer {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config file: {}", e.message())))
    }
}

impl RunConfig {
    /// Defaults, overridden by `file`, overridden by `flags`; then validated.
    pub fn resolve(file: Option<&ConfigLayer>, flags: &ConfigLayer) -> Result<Self> {
        let mut c = RunConfig::default();
        for layer in file.into_iter().chain(std::iter::once(flags)) {
            c.apply(layer)?;
        }
        c.validate()?;
        Ok(c)
    }

    fn apply(&mut self, l: &ConfigLayer) -> Result<()> {
        if let Some(v) = l.precision_digits {
            self.precision_digits = v;
        }
        if let Some(v) = l.sieve_limit {
            self.sieve_limit = v;
        }
        if let Some(v) = l.segment_size {
            self.segment_size = v;
        }
        if let Some(v) = l.threads {
            self.threads = v;
        }
        if let Some(v) = &l.checkpoints {
            self.checkpoint_policy = v.parse()?;
        }
        if let Some(v) = &l.cache_dir {
            self.cache_dir = v.clone();
        }
        if let Some(v) = &l.output_dir {
            self.output_dir = v.clone();
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_digits > MAX_DIGITS {
            return Err(Error::Config(format!("at most {MAX_DIGITS} digits are supported")));
        }
        Precision::new(self.precision_digits)?;
        if let CheckpointPolicy::LogGrid { points_per_decade: n } = self.checkpoint_policy {
            if !(MIN_POINTS_PER_DECADE..=MAX_POINTS_PER_DECADE).contains(&n) {
                return Err(Error::Config(format!(
                    "points per decade must lie in [{MIN_POINTS_PER_DECADE}, {MAX_POINTS_PER_DECADE}], got {n}"
                )));
            }
        }
        self.sieve_config()?.validate()
    }

    pub fn precision(&self) -> Result<Precision> {
        Precision::new(self.precision_digits)
    }

    /// Sorted, deduplicated checkpoints in `[2, limit]`, always ending at `limit`.
    pub fn checkpoints(&self) -> Result<Vec<u64>> {
        let limit = self.sieve_limit;
        if !(2..=MAX_LIMIT).contains(&limit) {
            return Err(Error::Config(format!(
                "sieve limit must lie in [2, {MAX_LIMIT}], got {limit}"
            )));
        }
        let mut v = match &self.checkpoint_policy {
            CheckpointPolicy::LogGrid { points_per_decade } => {
                let n = *points_per_decade as f64;
                let mut v: Vec<u64> = (2..=DENSE_UP_TO).collect();
                v.extend(ANCHOR_POINTS);
                let mut p = 1u64;
                while p <= limit / 10 {
                    p *= 10;
                    v.push(p);
                }
                let top = (limit as f64).log10() * n;
                for i in 1..=top.ceil() as u64 {
                    v.push(10f64.powf(i as f64 / n).round() as u64);
                }
                v
            }
            CheckpointPolicy::Explicit(list) => {
                if let Some(bad) = list.iter().find(|&&x| x < 2 || x > limit) {
                    return Err(Error::Config(format!(
                        "checkpoint {bad} outside [2, {limit}]"
                    )));
                }
                list.clone()
            }
        };
        v.push(limit);
        v.retain(|&x| (2..=limit).contains(&x));
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    pub fn sieve_config(&self) -> Result<SieveConfig> {
        let mut s = SieveConfig::new(self.sieve_limit, self.checkpoints()?);
        s.segment_size = self.segment_size;
        s.thread_count = self.threads;
        Ok(s)
    }

    /// Everything that can change a number in the output, in a fixed order.
    /// Threads and directories change nothing and are left out.
    pub fn canonical(&self) -> Result<String> {
        let cps: Vec<String> = self.checkpoints()?.iter().map(u64::to_string).collect();
        Ok(format!(
            "kmertens-run-v1\nprecision_digits={}\nsieve_limit={}\nsegment_size={}\ncheckpoint_policy={}\ncheckpoints={}\n",
            self.precision_digits,
            self.sieve_limit,
            self.segment_size,
            self.checkpoint_policy,
            cps.join(",")
        ))
    }

    /// SHA-256 of [`RunConfig::canonical`], hex.
    pub fn hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.canonical()?.as_bytes())))
    }
}
