//! The Mertens constant β and the families built on it: c_j, c*_j, ν_k, ν*_k, d_k.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::Float;

use super::{Bounded, Engine};
use crate::error::{Error, Result};
use crate::partitions::Partitions;

/// `β = γ − Σ_{j≥2} P(j)/j`, from `log(1 − 1/p) = −Σ_j p^{-j}/j`.
/// Since `P(j) < 2^{1−j}`, the terms past `J` sum to less than `2^{1−J}/(J+1)`.
pub fn mertens_beta(engine: &Engine) -> Result<Bounded> {
    let bits = engine.bits();
    let mut acc = engine.gamma();
    let mut j = 2u32;
    loop {
        let tail = Float::with_val(64, 1) >> (j as i32 - 1);
        let tail = tail / (j + 1);
        if tail < engine.tol() >> 4 {
            return Ok(acc.with_extra_err(&tail));
        }
        let p = engine.prime_zeta(j)?;
        acc = acc.sub(&p.div_u(j));
        j += 1;
        debug_assert!(j < 4 * bits);
    }
}

/// β again, splitting the primes at the engine cutoff `M`:
/// `β = γ + Σ_{p≤M}(1/p + log(1−1/p)) − Σ_{j≥2} P_{>M}(j)/j`.
pub fn beta_split_route(engine: &Engine) -> Result<Bounded> {
    let bits = engine.bits();
    let work = bits + 32;
    let mut head = Float::with_val(work, 0);
    for &p in engine.primes().iter().rev() {
        let inv = Float::with_val(work, 1u32) / p;
        let l = Float::with_val(work, -&inv).ln_1p();
        head += inv + l;
    }
    let count = engine.primes().len() as u32;
    let round = (Float::with_val(64, 1) >> (bits + 28) as i32) * count;
    let mut acc = engine
        .gamma()
        .add(&Bounded::exact(Float::with_val(bits, head)).with_extra_err(&round));
    let m = engine.cutoff();
    let mut j = 2u32;
    loop {
        // Σ_{i≥j} P_{>M}(i)/i ≤ Σ_{i≥j} M^{1−i}/(i(i−1)) ≤ 2 M^{1−j}/(j(j−1)).
        let rest = Float::with_val(64, m).pow(1 - j as i32) * 2u32 / (j * (j - 1));
        if rest < engine.tol() >> 4 {
            return Ok(acc.with_extra_err(&rest));
        }
        acc = acc.sub(&engine.prime_zeta_tail(j)?.div_u(j));
        j += 1;
    }
}

/// `c_1 = c*_1 = β`, `c_j = P(j) − (−1)^j ζ(j)`, `c*_j = (−1)^{j+1}(P(j) + ζ(j))`.
pub fn c_coefficients(
    engine: &Engine,
    beta: &Bounded,
    j_max: u32,
) -> Result<(BTreeMap<u32, Bounded>, BTreeMap<u32, Bounded>)> {
    if j_max < 1 {
        return Err(Error::Domain("c_coefficients needs j_max >= 1".into()));
    }
    let mut c = BTreeMap::new();
    let mut c_star = BTreeMap::new();
    c.insert(1, beta.clone());
    c_star.insert(1, beta.clone());
    for j in 2..=j_max {
        let p = engine.prime_zeta(j)?;
        let z = engine.zeta(j)?;
        let even = j % 2 == 0;
        c.insert(j, if even { p.sub(&z) } else { p.add(&z) });
        let s = p.add(&z);
        c_star.insert(j, if even { s.neg() } else { s });
    }
    Ok((c, c_star))
}

fn get<'a>(map: &'a BTreeMap<u32, Bounded>, j: u32, what: &str) -> Result<&'a Bounded> {
    map.get(&j)
        .ok_or_else(|| Error::Config(format!("{what}[{j}] missing")))
}

fn one(bits: u32) -> Bounded {
    Bounded::exact(Float::with_val(bits, 1))
}

/// `ν_0 = 1`, `ν_k = (1/k) Σ_{j=1}^k ν_{k−j} c_j`. Fed with `c*` it yields ν*_k.
pub fn nu_sequence(c: &BTreeMap<u32, Bounded>, k_max: u32) -> Result<Vec<Bounded>> {
    let bits = get(c, 1, "c")?.prec();
    let mut nu = vec![one(bits)];
    for k in 1..=k_max {
        let mut acc = Bounded::exact(Float::with_val(bits, 0));
        for j in 1..=k {
            acc = acc.add(&nu[(k - j) as usize].mul(get(c, j, "c")?));
        }
        nu.push(acc.div_u(k));
    }
    Ok(nu)
}

/// `Σ over partitions (n_1, n_2, …) of k of Π_j (w_j/j)^{n_j}/n_j!`,
/// optionally restricted to partitions without parts equal to 1.
fn partition_sum(
    w: &BTreeMap<u32, Bounded>,
    k: u32,
    bits: u32,
    skip_singletons: bool,
) -> Result<Bounded> {
    let mut total = Bounded::exact(Float::with_val(bits, 0));
    for mult in Partitions::new(k)? {
        if skip_singletons && mult.get(1).copied().unwrap_or(0) > 0 {
            continue;
        }
        let mut term = one(bits);
        for (j, &n) in mult.iter().enumerate().skip(1) {
            if n == 0 {
                continue;
            }
            let base = get(w, j as u32, "coefficient")?.div_u(j as u32);
            for i in 1..=n {
                term = term.mul(&base).div_u(i);
            }
        }
        total = total.add(&term);
    }
    Ok(total)
}

/// ν_k as the partition sum `Σ Π_j (c_j/j)^{n_j}/n_j!`; the oracle for
/// [`nu_sequence`].
pub fn nu_via_partitions(c: &BTreeMap<u32, Bounded>, k: u32) -> Result<Bounded> {
    let bits = get(c, 1, "c")?.prec();
    partition_sum(c, k, bits, false)
}

/// `d_0 = 1`, `d_k = (1/k) Σ_{j=2}^k d_{k−j} P(j)`; `d_1 = 0`.
pub fn d_sequence(prime_zeta: &BTreeMap<u32, Bounded>, k_max: u32) -> Result<Vec<Bounded>> {
    let bits = get(prime_zeta, 2, "prime_zeta")?.prec();
    let mut d = vec![one(bits)];
    for k in 1..=k_max {
        let mut acc = Bounded::exact(Float::with_val(bits, 0));
        for j in 2..=k {
            acc = acc.add(&d[(k - j) as usize].mul(get(prime_zeta, j, "prime_zeta")?));
        }
        d.push(acc.div_u(k));
    }
    Ok(d)
}

/// d_k as a sum over partitions of `k` without singletons.
pub fn d_via_partitions(prime_zeta: &BTreeMap<u32, Bounded>, k: u32) -> Result<Bounded> {
    let bits = get(prime_zeta, 2, "prime_zeta")?.prec();
    partition_sum(prime_zeta, k, bits, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::{euler_gamma, Precision};
    use crate::sieve::primes_up_to;

    fn engine(d: u32) -> Engine {
        Engine::new(Precision::new(d).unwrap()).unwrap()
    }

    #[test]
    fn beta_two_series_routes_agree() {
        let e = engine(50);
        let a = mertens_beta(&e).unwrap();
        let b = beta_split_route(&e).unwrap();
        let diff = Float::with_val(64, &a.value - &b.value).abs();
        assert!(diff < 1e-50, "{diff}");
        assert!(a.err < 1e-55);
        let reference = Float::parse("0.26149721284764278375542683860869585905156664826120").unwrap();
        let r = Float::with_val(e.bits(), reference);
        assert!(Float::with_val(64, &a.value - &r).abs() < 1e-49);
    }

    #[test]
    fn beta_against_direct_prime_sum() {
        // β = γ + Σ_{p≤x}(1/p + log(1−1/p)) + t(x), with
        // −t(x) = Σ_{p>x} Σ_{j≥2} p^{-j}/j ∈ [0, 0.6 Σ_{p>x} p^{-2}] ⊂ [0, 1.52/(x log x)].
        let x = 10_000_000u64;
        let primes = primes_up_to(x).unwrap();
        let mut s = Float::with_val(128, 0);
        for &p in primes.iter().rev() {
            let inv = Float::with_val(128, 1u32) / p;
            s += Float::with_val(128, -&inv).ln_1p() + inv;
        }
        let partial = (euler_gamma(128) + s).to_f64();
        let slack = 1.52 / (x as f64 * (x as f64).ln());
        let beta = mertens_beta(&engine(20)).unwrap().to_f64();
        assert!(beta <= partial + 1e-15 && beta >= partial - slack - 1e-15);
    }

    #[test]
    fn nu_recurrence_matches_partition_formula() {
        let e = engine(50);
        let beta = mertens_beta(&e).unwrap();
        let (c, c_star) = c_coefficients(&e, &beta, 14).unwrap();
        let nu = nu_sequence(&c, 14).unwrap();
        let nu_star = nu_sequence(&c_star, 14).unwrap();
        for k in 0..=14 {
            let a = nu_via_partitions(&c, k).unwrap();
            let b = nu_via_partitions(&c_star, k).unwrap();
            assert!(Float::with_val(64, &a.value - &nu[k as usize].value).abs() < 1e-45);
            assert!(Float::with_val(64, &b.value - &nu_star[k as usize].value).abs() < 1e-45);
        }
        // ν_2 = (c_2 + c_1²)/2
        let nu2 = c[&2].add(&c[&1].mul(&c[&1])).div_u(2);
        assert!(Float::with_val(64, &nu2.value - &nu[2].value).abs() < 1e-50);
        assert!((nu[2].to_f64() + 0.562153).abs() < 5e-7);
    }

    #[test]
    fn d_recurrence_matches_partition_formula() {
        let e = engine(40);
        let p: BTreeMap<u32, Bounded> = (2..=14).map(|j| (j, e.prime_zeta(j).unwrap())).collect();
        let d = d_sequence(&p, 14).unwrap();
        assert_eq!(d[0].value, 1);
        assert!(d[1].value.is_zero());
        assert!((d[2].to_f64() - 0.226_123_71).abs() < 1e-8);
        for k in 0..=14 {
            let o = d_via_partitions(&p, k).unwrap();
            assert!(Float::with_val(64, &o.value - &d[k as usize].value).abs() < 1e-35, "k = {k}");
        }
    }

    #[test]
    fn c_signs() {
        let e = engine(20);
        let beta = mertens_beta(&e).unwrap();
        let (c, cs) = c_coefficients(&e, &beta, 4).unwrap();
        assert!((c[&2].to_f64() + 1.192_686_6).abs() < 1e-6);
        assert!(c[&3].to_f64() > 1.3); // P(3) + ζ(3)
        assert!((cs[&2].to_f64() + 0.452_247_42 + 1.644_934_07).abs() < 1e-7);
        assert!(cs[&3].to_f64() > 1.3);
    }
}
