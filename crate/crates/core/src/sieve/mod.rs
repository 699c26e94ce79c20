//! Segmented factor sieve and the checkpointed sums built on it.

pub mod cache;
mod ledger;
mod segment;
mod smooth;

use crate::error::{Error, Result};

pub use ledger::{accumulate, CheckpointRecord, ErrorSample, SumLedger, LEDGER_BITS};
pub use segment::{sieve_segment, OmegaSegment};
pub use smooth::smooth_reciprocal;

/// Largest `n` accepted by [`primes_up_to`] (a 250 MB bitset).
pub const PRIME_SIEVE_BUDGET: u64 = 4_000_000_000;

/// Largest sieve limit supported at all.
pub const MAX_LIMIT: u64 = 10_000_000_000;

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;
pub const MIN_SEGMENT_SIZE: u64 = 1 << 16;
pub const DEFAULT_K_MAX: u32 = 8;
/// `k_max!` must stay below 2^53 so that `f(n)` is an exact double.
pub const MAX_K_MAX: u32 = 18;
pub const DEFAULT_LOGP_MOMENTS: u32 = 6;

/// All primes `≤ n`, ascending, by an odd-only bitset sieve.
pub fn primes_up_to(n: u64) -> Result<Vec<u64>> {
    if n > PRIME_SIEVE_BUDGET {
        return Err(Error::Resource(format!(
            "prime sieve up to {n} exceeds the budget of {PRIME_SIEVE_BUDGET}"
        )));
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    // bit i stands for 2i + 1
    let half = (n as usize - 1) / 2 + 1;
    let mut composite = vec![0u64; half.div_ceil(64)];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j / 64] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    let estimate = (n as f64 / (n as f64).ln() * 1.3) as usize + 8;
    let mut primes = Vec::with_capacity(estimate);
    primes.push(2);
    for i in 1..half {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            primes.push(2 * i as u64 + 1);
        }
    }
    Ok(primes)
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = ((n as f64).sqrt() as u64).min(u32::MAX as u64);
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Sieving primes for all segments up to `limit`.
#[derive(Debug, Clone)]
pub struct BasePrimes {
    limit: u64,
    primes: Vec<u64>,
}

impl BasePrimes {
    /// Primes up to `⌊√limit⌋`, enough to factor every `n ≤ limit`.
    pub fn for_limit(limit: u64) -> Result<Self> {
        let root = isqrt(limit);
        Ok(BasePrimes {
            limit: root,
            primes: primes_up_to(root)?,
        })
    }

    /// Largest `n` whose factorization these primes can complete.
    pub fn covers(&self) -> u64 {
        let r = self.limit + 1;
        r * r - 1
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    pub limit: u64,
    pub segment_size: u64,
    pub thread_count: usize,
    /// Strictly increasing, within `[2, limit]`.
    pub checkpoints: Vec<u64>,
    pub k_max: u32,
    /// Moments `Σ_{p≤x} log^j p / p` are kept for `1 ≤ j ≤ logp_moments`.
    pub logp_moments: u32,
}

impl SieveConfig {
    pub fn new(limit: u64, checkpoints: Vec<u64>) -> Self {
        SieveConfig {
            limit,
            segment_size: DEFAULT_SEGMENT_SIZE,
            thread_count: 1,
            checkpoints,
            k_max: DEFAULT_K_MAX,
            logp_moments: DEFAULT_LOGP_MOMENTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.limit < 2 || self.limit > MAX_LIMIT {
            return Err(Error::Config(format!(
                "sieve limit must lie in [2, {MAX_LIMIT}], got {}",
                self.limit
            )));
        }
        if self.segment_size < MIN_SEGMENT_SIZE || self.segment_size > 1 << 32 {
            return Err(Error::Config(format!(
                "segment size must lie in [2^16, 2^32], got {}",
                self.segment_size
            )));
        }
        if self.thread_count == 0 {
            return Err(Error::Config("thread count must be positive".into()));
        }
        if self.k_max < 2 || self.k_max > MAX_K_MAX {
            return Err(Error::Config(format!(
                "k_max must lie in [2, {MAX_K_MAX}], got {}",
                self.k_max
            )));
        }
        if self.logp_moments > 16 {
            return Err(Error::Config("at most 16 log-moments are supported".into()));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::Config("at least one checkpoint is required".into()));
        }
        for w in self.checkpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Config(format!(
                    "checkpoints must be strictly increasing ({} before {})",
                    w[0], w[1]
                )));
            }
        }
        let first = self.checkpoints[0];
        let last = *self.checkpoints.last().unwrap();
        if first < 2 || last > self.limit {
            return Err(Error::Config(format!(
                "checkpoints must lie in [2, {}], got range [{first}, {last}]",
                self.limit
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_prime_lists() {
        assert_eq!(primes_up_to(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap(), vec![2]);
        assert_eq!(primes_up_to(1).unwrap(), Vec::<u64>::new());
        assert_eq!(primes_up_to(3).unwrap(), vec![2, 3]);
        assert_eq!(primes_up_to(25).unwrap(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23]);
    }

    #[test]
    fn prime_count_to_one_million() {
        // Independent count: trial division against the primes below 1000.
        let small: Vec<u64> = (2..1000u64)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        let count = (2..=1_000_000u64)
            .filter(|&n| small.iter().take_while(|&&p| p * p <= n).all(|&p| n % p != 0))
            .count();
        assert_eq!(count, 78_498);
        assert_eq!(primes_up_to(1_000_000).unwrap().len(), 78_498);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            primes_up_to(PRIME_SIEVE_BUDGET + 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 3, 4, 15, 16, 17, 999_999_999_999, u32::MAX as u64 * u32::MAX as u64] {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1).checked_mul(r + 1).map_or(true, |s| s > n));
        }
    }

    #[test]
    fn config_validation() {
        let ok = SieveConfig::new(1000, vec![2, 10, 1000]);
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.checkpoints = vec![10, 10];
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        bad.checkpoints = vec![10, 2000];
        assert!(bad.validate().is_err());
        bad = ok.clone();
        bad.k_max = 19;
        assert!(bad.validate().is_err());
        bad = ok;
        bad.segment_size = 1000;
        assert!(bad.validate().is_err());
    }
}
