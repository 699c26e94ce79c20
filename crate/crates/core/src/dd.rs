//! Double-double arithmetic for the sieve accumulators.
//!
//! A [`Dd`] is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving
//! about 106 bits. Only the handful of operations the sieve needs are here:
//! exact reciprocals of integers, scaling by small integers or doubles, and
//! addition. Long sums go through [`PairwiseSum`], which keeps the number of
//! roundings any single term sees at `O(log n)`.

use std::ops::{Add, AddAssign};

use rug::Float;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

const SPLIT: f64 = 134_217_729.0; // 2^27 + 1

#[inline(always)]
fn split(a: f64) -> (f64, f64) {
    let t = SPLIT * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// `1/n` to double-double accuracy. Exact residual for `n < 2^53`.
    #[inline]
    pub fn recip(n: u64) -> Dd {
        debug_assert!(n > 0 && n < (1u64 << 53));
        let nf = n as f64;
        let hi = 1.0 / nf;
        let (p, e) = two_prod(hi, nf);
        let r = (1.0 - p) - e;
        let lo = r / nf;
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn to_float(self, bits: u32) -> Float {
        let mut f = Float::with_val(bits.max(128), self.hi);
        f += self.lo;
        Float::with_val(bits, f)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;

    /// Accurate double-double addition (both components two-summed).
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

/// Streaming pairwise summation.
///
/// Works like a binary counter: level `i` holds the sum of a block of `2^i`
/// consecutive terms, and two equal-sized blocks merge on carry. Each term
/// passes through at most `ceil(log2 n)` additions, so for nonnegative terms
/// the relative error of the total is bounded by `(3 log2 n + 2) * 2^-106`.
#[derive(Debug, Clone)]
pub struct PairwiseSum {
    levels: [Dd; 48],
    occupied: u64,
}

impl Default for PairwiseSum {
    fn default() -> Self {
        PairwiseSum {
            levels: [Dd::ZERO; 48],
            occupied: 0,
        }
    }
}

impl PairwiseSum {
    #[inline]
    pub fn push(&mut self, x: Dd) {
        let mut carry = x;
        let mut level = 0;
        while self.occupied & (1 << level) != 0 {
            carry = self.levels[level] + carry;
            self.occupied &= !(1 << level);
            level += 1;
        }
        self.levels[level] = carry;
        self.occupied |= 1 << level;
    }

    /// Sum of everything pushed so far, smallest blocks first.
    pub fn total(&self) -> Dd {
        let mut acc = Dd::ZERO;
        for (i, v) in self.levels.iter().enumerate() {
            if self.occupied & (1 << i) != 0 {
                acc += *v;
            }
        }
        acc
    }

    pub fn clear(&mut self) {
        self.occupied = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_is_double_double_accurate() {
        for n in [1u64, 3, 7, 10, 999_983, 1_000_000_007, (1u64 << 52) - 1] {
            let exact = Float::with_val(300, 1) / Float::with_val(300, n);
            let got = Dd::recip(n).to_float(300);
            let rel = (Float::with_val(300, &got - &exact) / &exact).abs();
            assert!(rel < 2f64.powi(-104), "n = {n}: rel {rel}");
        }
    }

    #[test]
    fn harmonic_sum_to_one_million() {
        let mut s = PairwiseSum::default();
        let mut exact = Float::with_val(256, 0);
        for n in 1..=1_000_000u64 {
            s.push(Dd::recip(n));
            exact += Float::with_val(256, 1) / Float::with_val(256, n);
        }
        let got = s.total().to_float(256);
        let rel = (Float::with_val(256, &got - &exact) / &exact).abs();
        assert!(rel < 1e-30, "relative error {rel}");
    }

    #[test]
    fn scaling_by_small_integers() {
        let x = Dd::recip(12).mul_f64(3.0);
        let got = x.to_float(300);
        let exact = Float::with_val(300, 1) / 4u32;
        let err = Float::with_val(300, &got - &exact).abs();
        assert!(err < 1e-32);
    }
}
