//! Integer partitions in multiplicity form.
//!
//! A partition of `k` is reported as `mult` with `mult[j]` = number of parts
//! equal to `j` (`mult[0]` unused), so that `sum_j j * mult[j] == k`.
//! Generation is iterative, in reverse lexicographic order of the parts.

use crate::error::{Error, Result};

/// Largest `k` enumerated without an explicit override. `p(30) = 5604`.
pub const DEFAULT_PARTITION_CAP: u32 = 30;

#[derive(Debug, Clone)]
pub struct Partitions {
    k: u32,
    parts: Vec<u32>,
    started: bool,
    done: bool,
}

impl Partitions {
    /// All partitions of `k`, refusing `k > DEFAULT_PARTITION_CAP`.
    pub fn new(k: u32) -> Result<Self> {
        Self::with_cap(k, DEFAULT_PARTITION_CAP)
    }

    pub fn with_cap(k: u32, cap: u32) -> Result<Self> {
        if k > cap {
            return Err(Error::Resource(format!(
                "partition enumeration of {k} exceeds the cap of {cap}"
            )));
        }
        Ok(Partitions {
            k,
            parts: Vec::new(),
            started: false,
            done: false,
        })
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            if self.k > 0 {
                self.parts.push(self.k);
            }
            return true;
        }
        // Strip trailing 1s, then decrement the last part > 1 and refill
        // greedily with copies of the new value.
        let mut ones = 0;
        while self.parts.last() == Some(&1) {
            self.parts.pop();
            ones += 1;
        }
        let Some(last) = self.parts.last_mut() else {
            return false;
        };
        *last -= 1;
        let v = *last;
        let mut rest = ones + 1;
        while rest > 0 {
            let take = rest.min(v);
            self.parts.push(take);
            rest -= take;
        }
        true
    }
}

impl Iterator for Partitions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        if !self.advance() {
            self.done = true;
            return None;
        }
        let mut mult = vec![0u32; self.k as usize + 1];
        for &p in &self.parts {
            mult[p as usize] += 1;
        }
        Some(mult)
    }
}

/// Number of partitions of `k` (Euler's pentagonal recurrence), used to
/// size-check the enumerator.
pub fn partition_count(k: u32) -> u64 {
    let k = k as usize;
    let mut p = vec![0u64; k + 1];
    p[0] = 1;
    for n in 1..=k {
        let mut total: i128 = 0;
        for i in 1.. {
            let g1 = i * (3 * i - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if i % 2 == 1 { 1 } else { -1 };
            total += sign * p[n - g1] as i128;
            let g2 = i * (3 * i + 1) / 2;
            if g2 <= n {
                total += sign * p[n - g2] as i128;
            }
        }
        p[n] = total as u64;
    }
    p[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_four() {
        let all: Vec<_> = Partitions::new(4).unwrap().collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0, 0, 0, 1],
                vec![0, 1, 0, 1, 0],
                vec![0, 0, 2, 0, 0],
                vec![0, 2, 1, 0, 0],
                vec![0, 4, 0, 0, 0],
            ]
        );
    }

    #[test]
    fn empty_partition_of_zero() {
        let all: Vec<_> = Partitions::new(0).unwrap().collect();
        assert_eq!(all, vec![vec![0]]);
    }

    #[test]
    fn counts_match_pentagonal_recurrence() {
        for k in 0..=30 {
            let n = Partitions::new(k).unwrap().count() as u64;
            assert_eq!(n, partition_count(k), "k = {k}");
        }
        assert_eq!(partition_count(30), 5604);
    }

    #[test]
    fn every_partition_sums_to_k() {
        for k in 0..=20u32 {
            for m in Partitions::new(k).unwrap() {
                let s: u32 = m.iter().enumerate().map(|(j, &c)| j as u32 * c).sum();
                assert_eq!(s, k);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(Partitions::new(31), Err(Error::Resource(_))));
        assert!(Partitions::with_cap(31, 40).is_ok());
    }
}
