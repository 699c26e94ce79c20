//! ζ(s) and ζ'(s) at integer arguments by Euler–Maclaurin summation.
//!
//! For `f` decreasing with all derivatives of fixed sign on `[N, ∞)`,
//!
//! ```text
//! Σ_{n≥N} f(n) = ∫_N^∞ f + f(N)/2 − Σ_{k=1}^{K} B_{2k}/(2k)! · f^{(2k−1)}(N) + R,
//! |R| ≤ 2ζ(2K)/(2π)^{2K} · |f^{(2K−1)}(N)| ≤ 4 |f^{(2K−1)}(N)| / (2π)^{2K}.
//! ```
//!
//! With `f(x) = x^{-s}` this gives ζ(s); with `f(x) = log x · x^{-s}` it gives
//! `−ζ'(s)`. For the latter, `f^{(m)}(x) = x^{-s-m}(A_m log x + B_m)` with
//! `A_{m+1} = −(s+m)A_m`, `B_{m+1} = −(s+m)B_m + A_m`, and the sign of
//! `f^{(2K)}` is fixed on `[N, ∞)` once `log N > Σ_{i<2K} 1/(s+i)`.

use std::sync::Mutex;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::Bounded;
use crate::error::{Error, Result};

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Exact Bernoulli numbers `B_0..=B_n` (convention `B_1 = −1/2`).
pub fn bernoulli_upto(n: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(Rational::from(1));
    }
    while cache.len() <= n {
        // B_m = −1/(m+1) · Σ_{k<m} C(m+1, k) B_k
        let m = cache.len() as u32;
        if m > 1 && m % 2 == 1 {
            cache.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for k in 0..m {
            acc += Rational::from(&binom * &cache[k as usize]);
            binom *= m + 1 - k;
            binom /= k + 1;
        }
        acc /= Integer::from(-(m as i64) - 1);
        cache.push(acc);
    }
    cache[..=n].to_vec()
}

/// Which of the two Euler–Maclaurin summands is being evaluated.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Summand {
    /// `x^{-s}`
    Power,
    /// `log x · x^{-s}`
    LogPower,
}

/// `log(|f^{(2K−1)}(N)|)` upper bound, in f64, for the remainder estimate.
fn log_remainder(kind: Summand, s: u32, k: u32, n: u64) -> f64 {
    let m = 2 * k - 1;
    // log (s)_m = Σ_{i<m} log(s+i)
    let log_poch: f64 = (0..m).map(|i| ((s + i) as f64).ln()).sum();
    let ln_n = (n as f64).ln();
    let base = log_poch - (s + m) as f64 * ln_n;
    let extra = match kind {
        Summand::Power => 0.0,
        Summand::LogPower => {
            let harm: f64 = (0..m).map(|i| 1.0 / (s + i) as f64).sum();
            (ln_n + harm).ln()
        }
    };
    4f64.ln() + base + extra - (2 * k) as f64 * (2.0 * std::f64::consts::PI).ln()
}

fn sign_condition(s: u32, k: u32, n: u64) -> bool {
    let harm: f64 = (0..2 * k).map(|i| 1.0 / (s + i) as f64).sum();
    (n as f64).ln() > harm * 1.01 + 1e-9
}

/// Picks `(N, K)` so that the remainder is below `2^-target_bits`.
fn plan(kind: Summand, s: u32, target_bits: u32) -> (u64, u32) {
    let target = -(target_bits as f64) * std::f64::consts::LN_2;
    let k = target_bits / 5 + 4;
    let mut n = (2 * k + s + 1) as u64;
    loop {
        let ok_sign = kind == Summand::Power || sign_condition(s, k, n);
        if ok_sign && log_remainder(kind, s, k, n) < target {
            return (n, k);
        }
        n += 1 + n / 8;
    }
}

fn eval(kind: Summand, s: u32, bits: u32) -> (Float, f64) {
    // Returns the value and the natural log of the remainder bound.
    let work = bits + 32;
    let (n, k) = plan(kind, s, bits + 8);
    let mut head = Float::with_val(work, 0);
    for i in 2..n {
        let x = Float::with_val(work, i);
        let t = Float::with_val(work, x.clone().pow(-(s as i32)));
        match kind {
            Summand::Power => head += t,
            Summand::LogPower => head += t * x.ln(),
        }
    }
    if kind == Summand::Power {
        head += 1u32;
    }

    let nf = Float::with_val(work, n);
    let ln_n = Float::with_val(work, nf.ln_ref());
    let n_pow = Float::with_val(work, nf.clone().pow(-(s as i32))); // N^{-s}
    let sm1 = Float::with_val(work, s - 1);

    // ∫_N^∞ f and f(N)/2
    let mut tail = match kind {
        Summand::Power => Float::with_val(work, &n_pow * &nf) / &sm1,
        Summand::LogPower => {
            let inv = Float::with_val(work, 1u32) / &sm1;
            let br = Float::with_val(work, &ln_n * &inv) + Float::with_val(work, &inv * &inv);
            Float::with_val(work, &n_pow * &nf) * br
        }
    };
    let f_n = match kind {
        Summand::Power => n_pow.clone(),
        Summand::LogPower => Float::with_val(work, &n_pow * &ln_n),
    };
    tail += Float::with_val(work, &f_n / 2u32);

    // Derivative coefficients A_m, B_m of f^{(m)}(x) = x^{-s-m}(A_m log x + B_m);
    // for Power, B_m ≡ 0 and log x is dropped.
    let bern = bernoulli_upto(2 * k as usize);
    let mut a = Integer::from(1);
    let mut b = Integer::from(0);
    let mut x_pow = n_pow; // N^{-s-m}
    let inv_n = Float::with_val(work, 1u32) / &nf;
    let mut fact = Integer::from(1); // (2j)!
    for m in 0..(2 * k) {
        // Advance to derivative order m+1.
        let factor = Integer::from(s + m);
        let new_b = -(Integer::from(&factor * &b)) + &a;
        a = -(factor * a);
        b = new_b;
        x_pow *= &inv_n;
        let order = m + 1;
        if order % 2 == 1 {
            let j = order.div_ceil(2); // term uses B_{2j}
            fact *= (2 * j - 1) * (2 * j);
            let deriv = match kind {
                Summand::Power => Float::with_val(work, &x_pow * &a),
                Summand::LogPower => {
                    let la = Float::with_val(work, &ln_n * &a) + &b;
                    Float::with_val(work, &x_pow * &la)
                }
            };
            let coeff = Float::with_val(work, &bern[2 * j as usize]) / &fact;
            tail -= coeff * deriv;
        }
    }
    let total = Float::with_val(bits, head + tail);
    (total, log_remainder(kind, s, k, n))
}

/// ζ(s) for integer `s ≥ 2` with absolute error below `2^-bits`.
pub fn zeta_int(s: u32, bits: u32) -> Result<Bounded> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta_int needs s >= 2, got {s}")));
    }
    let (value, trunc) = eval(Summand::Power, s, bits);
    Ok(Bounded::from_log_err(value, trunc))
}

/// ζ'(s) for integer `s ≥ 2` with absolute error below `2^-bits`.
pub fn zeta_int_deriv(s: u32, bits: u32) -> Result<Bounded> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta_int_deriv needs s >= 2, got {s}")));
    }
    let (value, trunc) = eval(Summand::LogPower, s, bits);
    Ok(Bounded::from_log_err(-value, trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn bernoulli_small_values() {
        let b = bernoulli_upto(12);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[12], Rational::from((-691, 2730)));
        assert_eq!(b[7], Rational::new());
    }

    #[test]
    fn even_values_match_closed_forms() {
        let bits = 300;
        let pi = Float::with_val(bits, Constant::Pi);
        let z2 = zeta_int(2, bits).unwrap();
        let z4 = zeta_int(4, bits).unwrap();
        assert!(close(&z2.value, &(Float::with_val(bits, pi.clone().pow(2u32)) / 6u32), 1e-85));
        assert!(close(&z4.value, &(Float::with_val(bits, pi.pow(4u32)) / 90u32), 1e-85));
        assert!(z2.err < 1e-88);
    }

    #[test]
    fn zeta3_against_direct_summation() {
        // Σ_{n<M} n^-3 + tail, tail ∈ [1/(2M²), 1/(2(M−1)²)].
        let bits = 200;
        let m = 200_000u32;
        let mut direct = Float::with_val(bits, 0);
        for n in (1..m).rev() {
            direct += Float::with_val(bits, n).pow(-3i32);
        }
        let lo = Float::with_val(bits, &direct + 0.5 / (m as f64).powi(2));
        let hi = Float::with_val(bits, &direct + 0.5 / ((m - 1) as f64).powi(2));
        let z3 = zeta_int(3, bits).unwrap().value;
        assert!(z3 > lo && z3 < hi);
        let reference = "1.2020569031595942853997381615114499907649862923404988817922715553";
        let r = Float::with_val(bits, Float::parse(reference).unwrap());
        assert!(close(&z3, &r, 1e-60));
    }

    #[test]
    fn matches_mpfr_zeta_at_many_arguments() {
        let bits = 256;
        for s in 2..=90u32 {
            let ours = zeta_int(s, bits).unwrap().value;
            let mpfr = Float::with_val(bits, Float::zeta_u(s));
            assert!(close(&ours, &mpfr, 1e-74), "s = {s}");
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        // ζ'(s) ≈ (ζ(s+h) − ζ(s−h)) / 2h using MPFR's real zeta.
        let bits = 256;
        let h = Float::with_val(bits, 1e-20);
        for s in [2u32, 3, 5, 10, 25] {
            let ours = zeta_int_deriv(s, bits).unwrap().value;
            let sp = Float::with_val(bits, Float::with_val(bits, s) + &h).zeta();
            let sm = Float::with_val(bits, Float::with_val(bits, s) - &h).zeta();
            let fd = Float::with_val(bits, sp - sm) / Float::with_val(bits, &h * 2u32);
            assert!(close(&ours, &fd, 1e-35), "s = {s}");
        }
        let z2d = zeta_int_deriv(2, bits).unwrap().value;
        let reference = Float::with_val(bits, Float::parse("-0.93754825431584375370257409456786497789786028861482992588").unwrap());
        assert!(close(&z2d, &reference, 1e-50));
    }

    #[test]
    fn rejects_pole() {
        assert!(matches!(zeta_int(1, 64), Err(Error::Domain(_))));
        assert!(matches!(zeta_int_deriv(0, 64), Err(Error::Domain(_))));
    }
}
