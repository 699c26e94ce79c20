//! `α₁ = lim (log x − Σ_{p≤x} log p/p) = γ + Σ_p log p/(p(p−1))`.
//!
//! With `Λ_S(t) = Σ_{p∈S, k≥1} log p · p^{-kt}` (so `Λ_all(t) = −ζ'(t)/ζ(t)`),
//! Möbius inversion gives `Σ_{p∈S} log p/(p(p−1)) = −Σ_{ℓ≥2} μ(ℓ) Λ_S(ℓ)`.

use rug::ops::Pow;
use rug::Float;

use super::prime_zeta::mobius;
use super::zeta::zeta_int_deriv;
use super::{ulp_of, Bounded, Engine};
use crate::error::{Error, Result};
use crate::precision::euler_gamma;

/// `Λ(t) = −ζ'(t)/ζ(t)`.
fn von_mangoldt_dirichlet(engine: &Engine, t: u32) -> Result<Bounded> {
    let bits = engine.bits();
    let zd = zeta_int_deriv(t, bits)?;
    let z = engine.zeta(t)?;
    let v = -Float::with_val(bits, &zd.value / &z.value);
    // ζ ≥ 1 and |ζ'/ζ| ≤ 1, so err ≤ err(ζ') + err(ζ).
    let err = Float::with_val(64, &zd.err + &z.err) + ulp_of(&v);
    Ok(Bounded::exact(v).with_extra_err(&err))
}

/// Primary route: primes up to the engine cutoff `M` directly, the rest as
/// `−Σ_ℓ μ(ℓ) Λ_{>M}(ℓ)` with `Λ_{>M}(ℓ) = Λ(ℓ) − Σ_{p≤M} log p/(p^ℓ − 1)`.
///
/// `|Λ_{>M}(ℓ)| ≤ 1.01·M^{1−ℓ}(log M/(ℓ−1) + 1/(ℓ−1)²)`, and the omitted
/// `ℓ > L` sum to at most twice the first omitted bound.
pub fn alpha1_closed_form(engine: &Engine) -> Result<Bounded> {
    let bits = engine.bits();
    let work = bits + 32;
    let primes = engine.primes();
    let logs: Vec<Float> = primes.iter().map(|&p| Float::with_val(work, p).ln()).collect();
    let mut head = Float::with_val(work, 0);
    for (&p, lp) in primes.iter().zip(&logs).rev() {
        head += Float::with_val(work, lp / Float::with_val(work, p * (p - 1)));
    }
    let round = Float::with_val(64, 1) >> (bits + 16) as i32;
    let mut acc = engine
        .gamma()
        .add(&Bounded::exact(Float::with_val(bits, head)).with_extra_err(&round));

    let m = engine.cutoff() as f64;
    let tol_ln = -(bits as f64 + 8.0) * std::f64::consts::LN_2;
    let mut l = 2u32;
    loop {
        let lf = (l - 1) as f64;
        let ln_bound = 1.01f64.ln() + (1.0 - l as f64) * m.ln() + (m.ln() / lf + 1.0 / (lf * lf)).ln();
        if ln_bound + 2f64.ln() < tol_ln {
            let rest = Float::with_val(64, ln_bound).exp() * 2u32;
            return Ok(acc.with_extra_err(&rest));
        }
        let mu = mobius(l as u64);
        if mu != 0 {
            let full = von_mangoldt_dirichlet(engine, l)?;
            let mut local = Float::with_val(work, 0);
            for (&p, lp) in primes.iter().zip(&logs).rev() {
                let denom = Float::with_val(work, Float::with_val(work, p).pow(l)) - 1u32;
                local += Float::with_val(work, lp / denom);
            }
            let local = Bounded::exact(Float::with_val(bits, local)).with_extra_err(&round);
            let rest = full.sub(&local);
            // α₁ = γ + head − Σ μ(ℓ) Λ_{>M}(ℓ)
            acc = if mu > 0 { acc.sub(&rest) } else { acc.add(&rest) };
        }
        l += 1;
    }
}

/// Independent arrangement without a prime split:
/// `α₁ = γ − Σ_{m≥2} P'(m)` with `−P'(m) = Σ_n μ(n) Λ(nm)`.
/// All pairs with `nm ≤ T` are kept; since `|Λ(t)| ≤ 4·2^{-t}` and `t` has at
/// most `t` factorizations `t = nm`, the rest is below `8(T+2)·2^{-T}`.
pub fn alpha1_prime_zeta_route(engine: &Engine) -> Result<Bounded> {
    let bits = engine.bits();
    let t_cap = bits + 16;
    let lambda: Vec<Bounded> = (0..=t_cap)
        .map(|t| {
            if t < 2 {
                Ok(Bounded::exact(Float::with_val(bits, 0)))
            } else {
                von_mangoldt_dirichlet(engine, t)
            }
        })
        .collect::<Result<_>>()?;
    let mut acc = engine.gamma();
    for m in 2..=t_cap {
        let mut n = 1;
        while n * m <= t_cap {
            match mobius(n as u64) {
                1 => acc = acc.add(&lambda[(n * m) as usize]),
                -1 => acc = acc.sub(&lambda[(n * m) as usize]),
                _ => {}
            }
            n += 1;
        }
    }
    let rest = (Float::with_val(64, 8 * (t_cap + 2))) >> t_cap as i32;
    Ok(acc.with_extra_err(&rest))
}

/// `γ + Σ_{p≤x} log p/(p(p−1))` and the remainder bound
/// `Σ_{p>x} log p/(p(p−1)) ≤ (1 + 1/x)·2.04/x` from `θ(t) < 1.01624 t`.
/// Returned as the midpoint of the enclosing interval.
pub fn alpha1_prime_partial_sum(primes: &[u64], x: u64, bits: u32) -> Result<Bounded> {
    if primes.last().copied().unwrap_or(0) < x.min(2) || x < 2 {
        return Err(Error::Precondition("prime list does not reach x".into()));
    }
    let work = bits + 32;
    let mut s = Float::with_val(work, 0);
    for &p in primes.iter().take_while(|&&p| p <= x).collect::<Vec<_>>().into_iter().rev() {
        s += Float::with_val(work, p).ln() / Float::with_val(work, p * (p - 1));
    }
    let xf = x as f64;
    let tail = (1.0 + 1.0 / xf) * 2.04 / xf;
    let half = Float::with_val(64, tail / 2.0);
    let v = Float::with_val(bits, euler_gamma(work) + s + &half);
    Ok(Bounded::exact(v).with_extra_err(&half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;
    use crate::sieve::primes_up_to;

    #[test]
    fn closed_form_matches_published_value_and_second_route() {
        let engine = Engine::new(Precision::new(30).unwrap()).unwrap();
        let a = alpha1_closed_form(&engine).unwrap();
        assert!((a.to_f64() - 1.332_582).abs() < 1e-6);
        assert!(a.err < 1e-35);
        let b = alpha1_prime_zeta_route(&engine).unwrap();
        let diff = Float::with_val(64, &a.value - &b.value).abs();
        assert!(diff < 1e-30, "{diff}");
    }

    #[test]
    fn partial_sum_encloses_closed_form() {
        let x = 1_000_000u64;
        let primes = primes_up_to(x).unwrap();
        let partial = alpha1_prime_partial_sum(&primes, x, 128).unwrap();
        let engine = Engine::new(Precision::new(20).unwrap()).unwrap();
        let a = alpha1_closed_form(&engine).unwrap();
        let diff = Float::with_val(64, &a.value - &partial.value).abs();
        assert!(diff <= partial.err);
    }
}
