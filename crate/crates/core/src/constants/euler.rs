//! The Euler-product constants
//!
//! ```text
//! β_p = (1−1/p)^p / p! · Π_{p'≠p} (1 − p/p')^{-1} (1 − 1/p')^p
//! δ_p = e^{-1} · Π_{q≠p} (1 − p/q)^{-1} e^{-p/q}
//! ```
//!
//! Both are evaluated as `sign · exp(log|·|)`. The factors with `p' < p` are
//! negative, so the sign is `(−1)^{π(p−1)}`; in particular β_3 < 0. Primes up
//! to the cutoff `M` enter the log-sum one by one; for `p' > M` the logs are
//! expanded, `−log(1−p/p') + p·log(1−1/p') = Σ_{j≥2} (p^j − p) p'^{-j}/j`
//! (and `Σ_{j≥2} p^j q^{-j}/j` for δ_p), so the tail is a prime-zeta series
//! in `P_{>M}(j)` with ratio `p/M`.

use rug::ops::Pow;
use rug::Float;

use super::{ulp_of, Bounded, Engine, EngineOptions, DEFAULT_PRIME_CUTOFF};
use crate::error::{Error, Result};
use crate::precision::{factorial, Precision};

#[derive(Debug, Clone)]
pub struct EulerPair {
    pub p: u64,
    pub beta_p: Bounded,
    pub delta_p: Bounded,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Largest cutoff a single evaluation may use; bounds memory and time.
const MAX_CUTOFF: u64 = 10_000_000;

/// Number of tail terms and the bound on the terms left out:
/// `Σ_{j>J} p^j M^{1−j}/(j(j−1)) ≤ M (p/M)^{J+1} / ((J+1) J (1 − p/M))`.
fn tail_terms(p: u64, m: u64, target_bits: u32) -> (u32, f64) {
    let r = p as f64 / m as f64;
    let target = -(target_bits as f64) * std::f64::consts::LN_2;
    let mut j = 2u32;
    loop {
        let jf = j as f64;
        let ln_rest = (m as f64).ln() + (jf + 1.0) * r.ln() - ((jf + 1.0) * jf * (1.0 - r)).ln();
        if ln_rest < target {
            return (j, ln_rest);
        }
        j += 1;
    }
}

pub fn euler_product_constants(p: u64, prec: Precision) -> Result<EulerPair> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let m = DEFAULT_PRIME_CUTOFF.max(p.saturating_mul(100));
    if m > MAX_CUTOFF {
        return Err(Error::Resource(format!("Euler-product constants for p = {p} need a prime cutoff above {MAX_CUTOFF}")));
    }
    let target = prec.bits() + 8;
    let (j_max, ln_rest) = tail_terms(p, m, target);
    // P_{>M}(j) is multiplied by up to p^J/J, so carry that many extra bits.
    let guard = (j_max as f64 * (p as f64).log2()).ceil() as u32 + 16;
    let engine = Engine::with_options(
        prec,
        EngineOptions {
            prime_cutoff: m,
            extra_bits: guard,
        },
    )?;
    let bits = engine.bits();
    let work = bits + 32;
    let pf = Float::with_val(work, p);

    let mut log_beta = Float::with_val(work, 0);
    let mut log_delta = Float::with_val(work, 0);
    let mut negatives = 0u32;
    for &q in engine.primes().iter().rev() {
        if q == p {
            continue;
        }
        if q < p {
            negatives += 1;
        }
        let ratio = Float::with_val(work, &pf / q);
        let common = -Float::with_val(work, Float::with_val(work, 1u32 - &ratio).abs()).ln();
        let inv = Float::with_val(work, 1u32) / q;
        let lb = Float::with_val(work, -&inv).ln_1p() * &pf;
        log_beta += Float::with_val(work, &common + lb);
        log_delta += common - ratio;
    }
    let count = engine.primes().len() as u32;
    let mut round = (Float::with_val(64, 1) >> (bits + 26) as i32) * count;

    // Local factors.
    let inv_p = Float::with_val(work, 1u32) / p;
    log_beta += Float::with_val(work, -inv_p).ln_1p() * &pf;
    log_beta -= Float::with_val(work, factorial(work, p as u32).ln());
    log_delta -= 1u32;

    // Tail over primes > M.
    let mut tail_err = Float::with_val(64, ln_rest).exp();
    for j in 2..=j_max {
        let pt = engine.prime_zeta_tail(j)?;
        let pj = Float::with_val(work, pf.clone().pow(j));
        let wd = Float::with_val(work, &pj / j);
        let wb = Float::with_val(work, Float::with_val(work, &pj - &pf) / j);
        log_beta += Float::with_val(work, &pt.value * &wb);
        log_delta += Float::with_val(work, &pt.value * &wd);
        tail_err += Float::with_val(64, &pt.err * &wd);
    }
    round += Float::with_val(64, 1) >> (bits + 20) as i32;
    let log_err = Float::with_val(64, &tail_err + &round);

    let finish = |log: Float| -> Bounded {
        let mut v = Float::with_val(bits, log.exp());
        if negatives % 2 == 1 {
            v = -v;
        }
        // |e^{L±ε} − e^L| ≤ e^L (e^ε − 1) ≤ 2ε e^L for ε ≤ 1.
        let err = Float::with_val(64, v.abs_ref()) * Float::with_val(64, &log_err * 2u32) + ulp_of(&v);
        let v = Float::with_val(prec.bits(), v);
        let ulp = ulp_of(&v);
        Bounded::exact(v).with_extra_err(&err).with_extra_err(&ulp)
    };
    Ok(EulerPair {
        p,
        beta_p: finish(log_beta),
        delta_p: finish(log_delta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::primes_up_to;

    #[test]
    fn beta_2_matches_published_digits() {
        let pair = euler_product_constants(2, Precision::new(30).unwrap()).unwrap();
        assert!((pair.beta_p.to_f64() - 0.189_347_5).abs() < 5e-8);
        assert!(pair.beta_p.err < 1e-33);
    }

    #[test]
    fn signs_alternate_with_prime_index() {
        let prec = Precision::new(20).unwrap();
        let signs: Vec<bool> = [2u64, 3, 5, 7]
            .iter()
            .map(|&p| euler_product_constants(p, prec).unwrap().beta_p.value.is_sign_negative())
            .collect();
        assert_eq!(signs, vec![false, true, false, true]);
    }

    #[test]
    fn rejects_composites() {
        assert!(matches!(
            euler_product_constants(9, Precision::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn beta_3_against_direct_product() {
        // Π over 3 < p' ≤ X plus the bound on the rest:
        // for p' > X, 0 < log factor = Σ_{j≥2}(3^j − 3)p'^{-j}/j ≤ 3.1 p'^{-2},
        // and Σ_{p'>X} p'^{-2} ≤ 2.52/(X log X).
        let x = 1_000_000u64;
        let primes = primes_up_to(x).unwrap();
        let bits = 128;
        let mut log = Float::with_val(bits, 0);
        for &q in primes.iter().rev() {
            if q == 3 {
                continue;
            }
            let r = Float::with_val(bits, 3u32) / q;
            log -= Float::with_val(bits, 1u32 - r).abs().ln();
            log += Float::with_val(bits, Float::with_val(bits, -1.0 / q as f64).ln_1p() * 3u32);
        }
        log += Float::with_val(bits, Float::with_val(bits, -1.0 / 3.0).ln_1p() * 3u32);
        log -= Float::with_val(bits, 6u32).ln();
        let partial = -log.exp().to_f64();
        let rel_slack = 3.1 * 2.52 / (x as f64 * (x as f64).ln());
        let ours = euler_product_constants(3, Precision::new(20).unwrap()).unwrap().beta_p.to_f64();
        assert!(ours < 0.0);
        // The omitted factors are > 1, so |β_3| ≥ |partial| up to the slack.
        assert!(ours.abs() >= partial.abs() * (1.0 - 1e-14));
        assert!(ours.abs() <= partial.abs() * (1.0 + 1.01 * rel_slack));
    }
}
