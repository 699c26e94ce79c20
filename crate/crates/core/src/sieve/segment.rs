use std::collections::BTreeMap;

use super::BasePrimes;
use crate::error::{Error, Result};

/// Factorization data for the integers `base..base + len`.
///
/// `denom_fact[i]` holds `Π e_i!` over the exponents of `base + i`, or
/// `u16::MAX` when the exact value lives in `denom_spill` (only for
/// high prime powers such as `2^9`, whose `9!` does not fit).
#[derive(Debug, Clone)]
pub struct OmegaSegment {
    pub base: u64,
    omega: Vec<u8>,
    squarefree: Vec<u64>,
    denom_fact: Vec<u16>,
    denom_spill: BTreeMap<u32, u128>,
}

const SPILLED: u16 = u16::MAX;

impl OmegaSegment {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Ω(base + i).
    #[inline]
    pub fn omega(&self, i: usize) -> u32 {
        self.omega[i] as u32
    }

    #[inline]
    pub fn is_squarefree(&self, i: usize) -> bool {
        self.squarefree[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn denom_fact(&self, i: usize) -> u128 {
        match self.denom_fact[i] {
            SPILLED => self.denom_spill[&(i as u32)],
            d => d as u128,
        }
    }

    /// Number of ordered prime factorizations, `Ω! / Π e_i!`.
    pub fn ordered_factorizations(&self, i: usize) -> u128 {
        let k = self.omega(i) as u128;
        (1..=k).product::<u128>() / self.denom_fact(i)
    }

    #[inline]
    fn bump_denom(&mut self, i: usize, e: u32) {
        match self.denom_fact[i] {
            SPILLED => *self.denom_spill.get_mut(&(i as u32)).unwrap() *= e as u128,
            d => {
                let v = d as u32 * e;
                if v >= SPILLED as u32 {
                    self.denom_fact[i] = SPILLED;
                    self.denom_spill.insert(i as u32, v as u128);
                } else {
                    self.denom_fact[i] = v as u16;
                }
            }
        }
    }
}

/// Sieves `[base, base + len)`: every prime `p ≤ √(base+len−1)` is divided
/// out with its exact exponent, then the cofactor, if any, is the single
/// prime factor above the square root.
pub fn sieve_segment(base: u64, len: u64, base_primes: &BasePrimes) -> Result<OmegaSegment> {
    if base == 0 {
        return Err(Error::Precondition("segments start at 1".into()));
    }
    if len == 0 || len > u32::MAX as u64 {
        return Err(Error::Precondition(format!("segment length {len} out of range")));
    }
    let end = base
        .checked_add(len)
        .ok_or_else(|| Error::Precondition("segment end overflows".into()))?;
    let last = end - 1;
    if base_primes.covers() < last {
        return Err(Error::Precondition(format!(
            "base primes cover n <= {} but the segment reaches {last}",
            base_primes.covers()
        )));
    }
    let n = len as usize;
    let mut seg = OmegaSegment {
        base,
        omega: vec![0; n],
        squarefree: vec![u64::MAX; n.div_ceil(64)],
        denom_fact: vec![1; n],
        denom_spill: BTreeMap::new(),
    };
    let mut prod = vec![1u64; n];

    for &p in base_primes.primes() {
        if p * p > last {
            break;
        }
        // e = 1
        let mut m = base.div_ceil(p) * p;
        while m < end {
            let i = (m - base) as usize;
            seg.omega[i] += 1;
            prod[i] *= p;
            m += p;
        }
        let mut pe = p;
        let mut e = 1u32;
        while pe <= last / p {
            pe *= p;
            e += 1;
            let mut m = base.div_ceil(pe) * pe;
            while m < end {
                let i = (m - base) as usize;
                seg.omega[i] += 1;
                prod[i] *= p;
                seg.squarefree[i / 64] &= !(1 << (i % 64));
                seg.bump_denom(i, e);
                m += pe;
            }
        }
    }
    for (i, &pr) in prod.iter().enumerate() {
        if pr < base + i as u64 {
            seg.omega[i] += 1;
        }
    }
    Ok(seg)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-division oracle: (Ω, squarefree, Π e_i!).
    fn factor(mut n: u64) -> (u32, bool, u128) {
        let mut omega = 0;
        let mut denom = 1u128;
        let mut sqf = true;
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            omega += e;
            if e > 1 {
                sqf = false;
            }
            denom *= (1..=e as u128).product::<u128>();
            d += 1;
        }
        if n > 1 {
            omega += 1;
        }
        (omega, sqf, denom)
    }

    #[test]
    fn hand_examples() {
        let bp = BasePrimes::for_limit(1000).unwrap();
        let seg = sieve_segment(1, 300, &bp).unwrap();
        // n = 1
        assert_eq!(seg.omega(0), 0);
        assert_eq!(seg.denom_fact(0), 1);
        // n = 12 = 2^2 * 3
        assert_eq!(seg.omega(11), 3);
        assert!(!seg.is_squarefree(11));
        assert_eq!(seg.denom_fact(11), 2);
        assert_eq!(seg.ordered_factorizations(11), 3);
        // n = 210
        assert_eq!(seg.omega(209), 4);
        assert!(seg.is_squarefree(209));
        assert_eq!(seg.ordered_factorizations(209), 24);
        // n = 256 = 2^8: 8! = 40320 fits; 2^9 would spill.
        assert_eq!(seg.omega(255), 8);
        assert_eq!(seg.denom_fact(255), 40320);
        assert_eq!(seg.ordered_factorizations(255), 1);
    }

    #[test]
    fn matches_trial_division_over_offset_segments() {
        let bp = BasePrimes::for_limit(200_000).unwrap();
        for (base, len) in [(1u64, 70_000u64), (70_001, 65_536), (135_537, 64_463)] {
            let seg = sieve_segment(base, len, &bp).unwrap();
            for i in 0..len as usize {
                let (o, s, d) = factor(base + i as u64);
                assert_eq!(seg.omega(i), o, "n = {}", base + i as u64);
                assert_eq!(seg.is_squarefree(i), s, "n = {}", base + i as u64);
                assert_eq!(seg.denom_fact(i), d, "n = {}", base + i as u64);
            }
        }
    }

    #[test]
    fn spill_for_large_prime_powers() {
        let bp = BasePrimes::for_limit(1 << 20).unwrap();
        let seg = sieve_segment(1 << 19, 1 << 16, &bp).unwrap();
        // 2^19: denom 19! exceeds u16
        assert_eq!(seg.omega(0), 19);
        assert_eq!(seg.denom_fact(0), (1..=19u128).product::<u128>());
        assert_eq!(seg.ordered_factorizations(0), 1);
    }

    #[test]
    fn insufficient_base_primes_rejected() {
        let bp = BasePrimes::for_limit(100).unwrap();
        assert!(matches!(sieve_segment(1, 1000, &bp), Err(Error::Precondition(_))));
        assert!(matches!(sieve_segment(0, 10, &bp), Err(Error::Precondition(_))));
    }
}
