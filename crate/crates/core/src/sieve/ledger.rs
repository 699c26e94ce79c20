//! Checkpointed accumulation of `N_k`, `𝓡_k`, `𝓢_k`, `𝓡₂*`, `T` and the
//! prime log-moments over a segmented sieve.
//!
//! Inside a segment, each sum is a [`PairwiseSum`] of double-double terms.
//! A segment is cut at every checkpoint it contains, and the pieces are added,
//! in ascending order, into [`LEDGER_BITS`]-bit running totals. The result
//! therefore depends on the segment size but not on the thread count.

use rayon::prelude::*;
use rug::Float;
use sha2::{Digest, Sha256};

use super::segment::sieve_segment;
use super::{BasePrimes, SieveConfig};
use crate::dd::{Dd, PairwiseSum};
use crate::error::{Error, Result};
use crate::precision::Real;

/// Precision of the running totals; far beyond the ~30 digits the
/// double-double segment sums deliver.
pub const LEDGER_BITS: u32 = 192;

/// Snapshot of every sum at `n = x` inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointRecord {
    pub x: u64,
    /// `N_k(x)` for `0 ≤ k ≤ k_max`.
    pub counts: Vec<u64>,
    /// `#{n ≤ x : Ω(n) > k_max}`.
    pub overflow_count: u64,
    /// `𝓡_k(x)`.
    pub r: Vec<Real>,
    /// `𝓢_k(x) = Σ_{Ω(n)=k, n≤x} f(n)/n`.
    pub s: Vec<Real>,
    /// `Σ_{n≤x, Ω(n)>k_max} 1/n`.
    pub overflow_recip: Real,
    pub r2_star: Real,
    /// `T(x) = Σ_{p≤x} 1/p`.
    pub t: Real,
    /// `Σ_{p≤x} log^j p / p` at index `j − 1`.
    pub logp_moments: Vec<Real>,
}

impl CheckpointRecord {
    /// `Σ_{n≤x} 1/n` reassembled from the per-`k` sums.
    pub fn harmonic(&self) -> Real {
        let mut h = self.overflow_recip.clone();
        for r in &self.r {
            h += r;
        }
        h
    }

    /// `E(x) = T(x) − log log x − β`.
    pub fn mertens_error(&self, beta: &Real) -> Real {
        let lx = Float::with_val(LEDGER_BITS, self.x).ln();
        let llx = lx.ln();
        Float::with_val(LEDGER_BITS, &self.t - llx) - beta
    }

    pub fn n2(&self) -> u64 {
        self.counts[2]
    }
}

/// `E(x)` at a checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSample {
    pub x: u64,
    pub e: Real,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumLedger {
    pub limit: u64,
    pub k_max: u32,
    pub logp_moments: u32,
    pub segment_size: u64,
    pub records: Vec<CheckpointRecord>,
}

impl SumLedger {
    pub fn at(&self, x: u64) -> Option<&CheckpointRecord> {
        self.records
            .binary_search_by_key(&x, |r| r.x)
            .ok()
            .map(|i| &self.records[i])
    }

    /// Records with `lo ≤ x ≤ hi`.
    pub fn range(&self, lo: u64, hi: u64) -> impl Iterator<Item = &CheckpointRecord> {
        self.records.iter().filter(move |r| r.x >= lo && r.x <= hi)
    }

    pub fn last(&self) -> &CheckpointRecord {
        self.records.last().expect("ledgers always hold a record")
    }

    pub fn checkpoints(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.x).collect()
    }

    pub fn error_samples(&self, beta: &Real) -> Vec<ErrorSample> {
        self.records
            .iter()
            .map(|r| ErrorSample {
                x: r.x,
                e: r.mertens_error(beta),
            })
            .collect()
    }
}

impl SieveConfig {
    /// Hash of everything that determines the ledger bit for bit
    /// (the thread count does not).
    pub fn ledger_key(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"kmertens-ledger-v1");
        for v in [
            self.limit,
            self.segment_size,
            self.k_max as u64,
            self.logp_moments as u64,
            self.checkpoints.len() as u64,
        ] {
            h.update(v.to_le_bytes());
        }
        for c in &self.checkpoints {
            h.update(c.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Sums over a run of consecutive integers.
#[derive(Debug, Clone)]
struct Partial {
    end: u64,
    checkpoint: bool,
    counts: Vec<u64>,
    overflow_count: u64,
    r: Vec<Dd>,
    s: Vec<Dd>,
    overflow_recip: Dd,
    r2_star: Dd,
    t: Dd,
    logp: Vec<Dd>,
}

struct SegmentSums {
    counts: Vec<u64>,
    overflow_count: u64,
    r: Vec<PairwiseSum>,
    s: Vec<PairwiseSum>,
    overflow_recip: PairwiseSum,
    r2_star: PairwiseSum,
    t: PairwiseSum,
    logp: Vec<PairwiseSum>,
}

impl SegmentSums {
    fn new(k_max: u32, moments: u32) -> Self {
        let k = k_max as usize + 1;
        SegmentSums {
            counts: vec![0; k],
            overflow_count: 0,
            r: vec![PairwiseSum::default(); k],
            s: vec![PairwiseSum::default(); k],
            overflow_recip: PairwiseSum::default(),
            r2_star: PairwiseSum::default(),
            t: PairwiseSum::default(),
            logp: vec![PairwiseSum::default(); moments as usize],
        }
    }

    fn take(&mut self, end: u64, checkpoint: bool) -> Partial {
        let drain = |v: &mut [PairwiseSum]| -> Vec<Dd> {
            v.iter_mut()
                .map(|s| {
                    let t = s.total();
                    s.clear();
                    t
                })
                .collect()
        };
        let one = |s: &mut PairwiseSum| {
            let t = s.total();
            s.clear();
            t
        };
        let width = self.counts.len();
        Partial {
            end,
            checkpoint,
            counts: std::mem::replace(&mut self.counts, vec![0; width]),
            overflow_count: std::mem::take(&mut self.overflow_count),
            r: drain(&mut self.r),
            s: drain(&mut self.s),
            overflow_recip: one(&mut self.overflow_recip),
            r2_star: one(&mut self.r2_star),
            t: one(&mut self.t),
            logp: drain(&mut self.logp),
        }
    }
}

fn process_segment(
    base: u64,
    len: u64,
    bp: &BasePrimes,
    cfg: &SieveConfig,
    checkpoints: &[u64],
) -> Result<Vec<Partial>> {
    let seg = sieve_segment(base, len, bp)?;
    let k_max = cfg.k_max;
    let mut fact = vec![1f64; k_max as usize + 1];
    for k in 1..fact.len() {
        fact[k] = fact[k - 1] * k as f64;
    }
    let mut sums = SegmentSums::new(k_max, cfg.logp_moments);
    let mut out = Vec::with_capacity(checkpoints.len() + 1);
    let mut cps = checkpoints.iter().peekable();
    for i in 0..seg.len() {
        let n = base + i as u64;
        let k = seg.omega(i);
        let recip = Dd::recip(n);
        if k <= k_max {
            let ku = k as usize;
            sums.counts[ku] += 1;
            sums.r[ku].push(recip);
            // k! and Π e_i! are exact doubles below 2^53, so f(n) is exact.
            let f = fact[ku] / seg.denom_fact(i) as f64;
            sums.s[ku].push(if f == 1.0 { recip } else { recip.mul_f64(f) });
            if k == 1 {
                sums.t.push(recip);
                let lp = (n as f64).ln();
                let mut w = 1.0;
                for m in sums.logp.iter_mut() {
                    w *= lp;
                    m.push(recip.mul_f64(w));
                }
            } else if k == 2 && seg.is_squarefree(i) {
                sums.r2_star.push(recip);
            }
        } else {
            sums.overflow_count += 1;
            sums.overflow_recip.push(recip);
        }
        if cps.peek() == Some(&&n) {
            cps.next();
            out.push(sums.take(n, true));
        }
    }
    if out.last().map_or(true, |p| p.end != base + len - 1) {
        out.push(sums.take(base + len - 1, false));
    }
    Ok(out)
}

struct Totals {
    counts: Vec<u64>,
    overflow_count: u64,
    r: Vec<Real>,
    s: Vec<Real>,
    overflow_recip: Real,
    r2_star: Real,
    t: Real,
    logp: Vec<Real>,
}

fn add_dd(acc: &mut Real, d: Dd) {
    *acc += d.hi;
    *acc += d.lo;
}

impl Totals {
    fn new(k_max: u32, moments: u32) -> Self {
        let z = || Float::with_val(LEDGER_BITS, 0);
        Totals {
            counts: vec![0; k_max as usize + 1],
            overflow_count: 0,
            r: vec![z(); k_max as usize + 1],
            s: vec![z(); k_max as usize + 1],
            overflow_recip: z(),
            r2_star: z(),
            t: z(),
            logp: vec![z(); moments as usize],
        }
    }

    fn absorb(&mut self, p: &Partial) {
        for (a, b) in self.counts.iter_mut().zip(&p.counts) {
            *a += b;
        }
        self.overflow_count += p.overflow_count;
        for (a, &b) in self.r.iter_mut().zip(&p.r) {
            add_dd(a, b);
        }
        for (a, &b) in self.s.iter_mut().zip(&p.s) {
            add_dd(a, b);
        }
        add_dd(&mut self.overflow_recip, p.overflow_recip);
        add_dd(&mut self.r2_star, p.r2_star);
        add_dd(&mut self.t, p.t);
        for (a, &b) in self.logp.iter_mut().zip(&p.logp) {
            add_dd(a, b);
        }
    }

    fn snapshot(&self, x: u64) -> CheckpointRecord {
        CheckpointRecord {
            x,
            counts: self.counts.clone(),
            overflow_count: self.overflow_count,
            r: self.r.clone(),
            s: self.s.clone(),
            overflow_recip: self.overflow_recip.clone(),
            r2_star: self.r2_star.clone(),
            t: self.t.clone(),
            logp_moments: self.logp.clone(),
        }
    }
}

/// Runs the sieve over `[1, limit]` and snapshots all sums at each checkpoint.
pub fn accumulate(cfg: &SieveConfig, beta: &Real) -> Result<(SumLedger, Vec<ErrorSample>)> {
    cfg.validate()?;
    let bp = BasePrimes::for_limit(cfg.limit)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.thread_count)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?;
    let seg = cfg.segment_size;
    let n_segments = cfg.limit.div_ceil(seg);
    let batch = (4 * cfg.thread_count as u64).max(1);

    let mut totals = Totals::new(cfg.k_max, cfg.logp_moments);
    let mut records = Vec::with_capacity(cfg.checkpoints.len());
    let mut s0 = 0;
    while s0 < n_segments {
        let s1 = (s0 + batch).min(n_segments);
        let results: Vec<Result<Vec<Partial>>> = pool.install(|| {
            (s0..s1)
                .into_par_iter()
                .map(|s| {
                    let base = 1 + s * seg;
                    let last = ((s + 1) * seg).min(cfg.limit);
                    let lo = cfg.checkpoints.partition_point(|&c| c < base);
                    let hi = cfg.checkpoints.partition_point(|&c| c <= last);
                    process_segment(base, last - base + 1, &bp, cfg, &cfg.checkpoints[lo..hi])
                })
                .collect()
        });
        for partials in results {
            for p in partials? {
                totals.absorb(&p);
                if p.checkpoint {
                    records.push(totals.snapshot(p.end));
                }
            }
        }
        s0 = s1;
    }

    let ledger = SumLedger {
        limit: cfg.limit,
        k_max: cfg.k_max,
        logp_moments: cfg.logp_moments,
        segment_size: cfg.segment_size,
        records,
    };
    let samples = ledger.error_samples(beta);
    Ok((ledger, samples))
}
