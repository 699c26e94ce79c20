//! Prime zeta function at integer arguments.
//!
//! Primary route: `P(s) = Σ_{n≥1} μ(n)/n · log ζ(ns)`. With
//! `0 < log ζ(t) ≤ ζ(t) − 1 ≤ 3·2^{-t}` for `t ≥ 2`, the terms with `n > N`
//! contribute at most `Σ_{n>N} 3·2^{-ns}/n ≤ 6·2^{-(N+1)s}`.

use rug::ops::Pow;
use rug::Float;

use super::{ulp_of, Bounded, Engine};
use crate::error::{Error, Result};

/// Möbius function by trial division; only used for small arguments.
pub fn mobius(mut n: u64) -> i32 {
    assert!(n > 0, "mobius(0) is undefined");
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn tail_log2_bound(s: u32, n_last: u32) -> Float {
    // 6 · 2^{-(N+1)s}
    Float::with_val(64, 6) >> ((n_last + 1) * s) as i32
}

impl Engine {
    /// `P(j)` via the Möbius–log-zeta identity.
    pub fn prime_zeta(&self, j: u32) -> Result<Bounded> {
        if j < 2 {
            return Err(Error::Domain(format!("prime_zeta needs j >= 2, got {j}")));
        }
        let bits = self.bits();
        let t_max = self.t_max();
        let mut acc = Bounded::exact(Float::with_val(bits, 0));
        let mut n_last = 0;
        let mut n = 1u32;
        while n * j <= t_max {
            n_last = n;
            let mu = mobius(n as u64);
            if mu != 0 {
                let z = self.zeta(n * j)?;
                // log ζ = log1p(ζ − 1); d(log ζ) ≤ dζ since ζ ≥ 1.
                let zm1 = Float::with_val(bits, &z.value - 1u32);
                let lv = zm1.ln_1p();
                let ulp = ulp_of(&lv);
                let l = Bounded::exact(lv).with_extra_err(&z.err).with_extra_err(&ulp);
                let term = l.div_u(n);
                acc = if mu > 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            n += 1;
        }
        Ok(acc.with_extra_err(&tail_log2_bound(j, n_last)))
    }

    /// `P_{>M}(j) = Σ_{p>M} p^{-j}` with `M` the engine's prime cutoff.
    ///
    /// Returned as `P(j) − Σ_{p≤M} p^{-j}` unless the a priori bound
    /// `0 ≤ P_{>M}(j) ≤ M^{1−j}/(j−1)` is already tighter than that difference.
    pub fn prime_zeta_tail(&self, j: u32) -> Result<Bounded> {
        let bits = self.bits();
        let m = self.cutoff();
        let upper = Float::with_val(64, m).pow(1 - j as i32) / (j - 1);
        let full = self.prime_zeta(j)?;
        if full.err > upper {
            let half = Float::with_val(64, &upper / 2u32);
            return Ok(Bounded::exact(Float::with_val(bits, &half)).with_extra_err(&half));
        }
        let mut head = Float::with_val(bits + 32, 0);
        for &p in self.primes().iter().rev() {
            head += Float::with_val(bits + 32, p).pow(-(j as i32));
        }
        let count = self.primes().len() as u32;
        let round = Float::with_val(64, &head) >> (bits + 30) as i32;
        let head = Bounded::exact(Float::with_val(bits, head)).with_extra_err(&(round * count));
        Ok(full.sub(&head))
    }
}

/// Second route for `P(j)`: the primes up to the cutoff `M` term by term,
/// and the rest through the `M`-rough zeta function
/// `ζ_{>M}(t) = ζ(t)·∏_{p≤M}(1 − p^{-t})`, so that
/// `P_{>M}(j) = Σ_n μ(n)/n · log ζ_{>M}(nj)`. Since
/// `log ζ_{>M}(t) ≤ Σ_{n>M} n^{-t} ≤ M^{1−t}/(t−1)`, a handful of `n` suffice.
pub fn prime_zeta_split(engine: &Engine, j: u32) -> Result<Bounded> {
    if j < 2 {
        return Err(Error::Domain(format!("prime_zeta needs j >= 2, got {j}")));
    }
    let bits = engine.bits();
    let work = bits + 32;
    let m = engine.cutoff() as f64;
    let primes = engine.primes();
    let tol_ln = -(bits as f64 + 8.0) * std::f64::consts::LN_2;
    let rough_bound_ln = |t: u32| (1.0 - t as f64) * m.ln() - ((t - 1) as f64).ln();

    let mut head = Float::with_val(work, 0);
    for &p in primes.iter().rev() {
        head += Float::with_val(work, p).pow(-(j as i32));
    }
    let mut acc = Bounded::exact(Float::with_val(bits, head))
        .with_extra_err(&(Float::with_val(64, 1) >> (bits + 20) as i32));
    let mut n = 1u32;
    loop {
        let t = n * j;
        if rough_bound_ln(t) + 1.0 < tol_ln {
            // Remaining n contribute at most 2·M^{1−t}/(t−1).
            let bound = Float::with_val(64, rough_bound_ln(t)).exp() * 2u32;
            return Ok(acc.with_extra_err(&bound));
        }
        let mu = mobius(n as u64);
        if mu != 0 {
            let z = engine.zeta(t)?;
            let mut rough = Float::with_val(work, &z.value);
            for &p in primes {
                let f = Float::with_val(work, p).pow(-(t as i32));
                rough -= Float::with_val(work, &rough * f);
            }
            let zm1 = Float::with_val(bits, rough - 1u32);
            let lv = zm1.ln_1p();
            let round = Float::with_val(64, 1) >> (bits + 16) as i32;
            let ulp = ulp_of(&lv);
            let l = Bounded::exact(lv)
                .with_extra_err(&z.err)
                .with_extra_err(&ulp)
                .with_extra_err(&round);
            let term = l.div_u(n);
            acc = if mu > 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        n += 1;
    }
}

/// Oracle: `Σ_{p≤x} p^{-j}` plus the bound
/// `Σ_{p>x} p^{-j} ≤ 1.26·j / ((j−1) x^{j−1} log x)`, which follows from
/// `π(t) < 1.25506 t/log t` and partial summation. Returned as the midpoint
/// of the enclosing interval.
pub fn prime_zeta_direct(j: u32, primes: &[u64], x: u64, bits: u32) -> Result<Bounded> {
    if j < 2 {
        return Err(Error::Domain(format!("prime_zeta needs j >= 2, got {j}")));
    }
    if primes.last().copied().unwrap_or(0) < x.min(2) {
        return Err(Error::Precondition("prime list does not reach x".into()));
    }
    let mut sum = Float::with_val(bits + 32, 0);
    let mut count = 0u32;
    for &p in primes.iter().take_while(|&&p| p <= x).collect::<Vec<_>>().iter().rev() {
        sum += Float::with_val(bits + 32, *p).pow(-(j as i32));
        count += 1;
    }
    let xf = Float::with_val(64, x);
    let tail = Float::with_val(64, 1.26 * j as f64 / (j - 1) as f64)
        / (Float::with_val(64, xf.clone().pow(j - 1)) * xf.ln());
    let half = Float::with_val(64, &tail / 2u32);
    let round = Float::with_val(64, &sum) >> (bits + 30) as i32;
    let value = Float::with_val(bits, sum + &half);
    Ok(Bounded::exact(value)
        .with_extra_err(&half)
        .with_extra_err(&(round * count)))
}
