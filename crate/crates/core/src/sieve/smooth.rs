use rug::Float;

use super::primes_up_to;
use crate::error::Result;
use crate::precision::{Precision, Real};

/// `𝓟_k(x) = Σ_{Ω(n)=k, P⁺(n)≤x} 1/n`, the complete homogeneous symmetric
/// polynomial `h_k` in the variables `1/p, p ≤ x`.
///
/// Uses Newton's identity `k·h_k = Σ_{j=1}^k π_j h_{k−j}` with power sums
/// `π_j = Σ_{p≤x} p^{-j}`; every term is positive, so the recurrence is stable.
pub fn smooth_reciprocal(k: u32, x: u64, prec: Precision) -> Result<Real> {
    let bits = prec.bits() + 16;
    if k == 0 {
        return Ok(Float::with_val(prec.bits(), 1));
    }
    let primes = primes_up_to(x)?;
    let mut power_sums = vec![Float::with_val(bits, 0); k as usize + 1];
    // Largest primes first: smallest terms are added before the big ones.
    for &p in primes.iter().rev() {
        let inv = Float::with_val(bits, p).recip();
        let mut w = inv.clone();
        for pj in power_sums.iter_mut().skip(1) {
            *pj += &w;
            w *= &inv;
        }
    }
    let mut h = vec![Float::with_val(bits, 1)];
    for m in 1..=k as usize {
        let mut acc = Float::with_val(bits, 0);
        for j in 1..=m {
            acc += Float::with_val(bits, &power_sums[j] * &h[m - j]);
        }
        h.push(acc / m as u32);
    }
    Ok(Float::with_val(prec.bits(), &h[k as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn low_orders() {
        let p = Precision::new(30).unwrap();
        assert_eq!(smooth_reciprocal(0, 100, p).unwrap(), 1);
        let t: Rational = [2u32, 3, 5, 7].iter().map(|&q| Rational::from((1, q))).sum();
        let got = smooth_reciprocal(1, 10, p).unwrap();
        assert!(Float::with_val(64, got - Float::with_val(200, &t)).abs() < 1e-35);
    }

    #[test]
    fn p2_at_100_matches_enumeration() {
        // Ω(n) = 2 with P⁺(n) ≤ 100 is the finite set {pq : p ≤ q ≤ 100}, n ≤ 97².
        let primes = primes_up_to(100).unwrap();
        let mut exact = Rational::new();
        for n in 4u64..=97 * 97 {
            let mut m = n;
            let mut omega = 0;
            let mut largest = 0;
            for &p in &primes {
                while m % p == 0 {
                    m /= p;
                    omega += 1;
                    largest = p;
                }
            }
            if m == 1 && omega == 2 && largest <= 100 {
                exact += Rational::from((1, n));
            }
        }
        let got = smooth_reciprocal(2, 100, Precision::new(40).unwrap()).unwrap();
        let diff = Float::with_val(64, got - Float::with_val(256, &exact)).abs();
        assert!(diff < 1e-42, "{diff}");
    }

    #[test]
    fn p3_at_small_x_matches_triple_sum() {
        let primes = primes_up_to(30).unwrap();
        let mut exact = Rational::new();
        for (a, &p) in primes.iter().enumerate() {
            for (b, &q) in primes.iter().enumerate().skip(a) {
                for &r in primes.iter().skip(b) {
                    exact += Rational::from((1, p * q * r));
                }
            }
        }
        let got = smooth_reciprocal(3, 30, Precision::new(40).unwrap()).unwrap();
        assert!(Float::with_val(64, got - Float::with_val(256, &exact)).abs() < 1e-42);
    }
}
