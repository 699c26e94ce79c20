//! Taylor data of `1/Γ(z+1)`, the Qi–Hu coefficients `a_j`, Tenenbaum's
//! `λ_{j,k}`, and `G(z) = e^{(β−γ)z}/Γ(z+1)`.

use std::collections::BTreeMap;

use rug::Float;

use super::{ulp_of, Bounded};
use crate::error::{Error, Result};
use crate::precision::{binomial, factorial, Real};

/// Coefficients `g_0..=g_{m_max}` of `1/Γ(z+1) = Σ g_m z^m`.
///
/// `log(1/Γ(z+1)) = Σ_{j≥1} l_j z^j` with `l_1 = γ`, `l_j = (−1)^{j+1} ζ(j)/j`,
/// and the exponential is taken with `g_m = (1/m) Σ_{j=1}^m j·l_j·g_{m−j}`.
pub fn inv_gamma_taylor(
    gamma: &Bounded,
    zeta: &BTreeMap<u32, Bounded>,
    m_max: u32,
) -> Result<Vec<Bounded>> {
    let bits = gamma.prec();
    // j·l_j
    let mut jl = vec![Bounded::exact(Float::with_val(bits, 0)), gamma.clone()];
    for j in 2..=m_max {
        let z = zeta
            .get(&j)
            .ok_or_else(|| Error::Config(format!("zeta[{j}] missing")))?;
        jl.push(if j % 2 == 1 { z.clone() } else { z.neg() });
    }
    let mut g = vec![Bounded::exact(Float::with_val(bits, 1))];
    for m in 1..=m_max {
        let mut acc = Bounded::exact(Float::with_val(bits, 0));
        for j in 1..=m {
            acc = acc.add(&jl[j as usize].mul(&g[(m - j) as usize]));
        }
        g.push(acc.div_u(m));
    }
    Ok(g)
}

/// `a_0 = 1`, `a_1 = 0`, `a_j = Σ_{i=1}^{j−1} (−1)^i C(j−1, i) i! ζ(i+1) a_{j−1−i}`.
pub fn qihu_a(zeta: &BTreeMap<u32, Bounded>, j_max: u32) -> Result<Vec<Bounded>> {
    let bits = zeta
        .get(&2)
        .ok_or_else(|| Error::Config("zeta[2] missing".into()))?
        .prec();
    let mut a = vec![Bounded::exact(Float::with_val(bits, 1))];
    if j_max >= 1 {
        a.push(Bounded::exact(Float::with_val(bits, 0)));
    }
    for j in 2..=j_max {
        let mut acc = Bounded::exact(Float::with_val(bits, 0));
        for i in 1..j {
            let z = zeta
                .get(&(i + 1))
                .ok_or_else(|| Error::Config(format!("zeta[{}] missing", i + 1)))?;
            let w = Float::with_val(bits, binomial(bits, j - 1, i) * factorial(bits, i));
            let term = z.mul(&a[(j - 1 - i) as usize]).scale(&w);
            acc = if i % 2 == 1 { acc.sub(&term) } else { acc.add(&term) };
        }
        a.push(acc);
    }
    Ok(a)
}

/// `b_m = a_m / m!`.
pub fn qihu_b(a: &[Bounded]) -> Vec<Bounded> {
    a.iter()
        .enumerate()
        .map(|(m, am)| {
            let inv = Float::with_val(am.prec(), 1) / factorial(am.prec(), m as u32);
            am.scale(&inv)
        })
        .collect()
}

/// `λ_{j,k} = Σ_{m=0}^{k−j} k!/(m! j! (k−m−j)!) · (β−γ)^{k−m−j} · (1/Γ)^{(m)}(1)`,
/// where `(1/Γ)^{(m)}(1) = m!·g_m`.
pub fn tenenbaum_lambda(j: u32, k: u32, beta_minus_gamma: &Bounded, g: &[Bounded]) -> Result<Bounded> {
    if j > k {
        return Err(Error::Domain(format!("lambda needs j <= k, got j = {j}, k = {k}")));
    }
    if g.len() <= (k - j) as usize {
        return Err(Error::Config(format!(
            "lambda({j},{k}) needs {} Taylor coefficients, have {}",
            k - j + 1,
            g.len()
        )));
    }
    let bits = beta_minus_gamma.prec();
    let mut powers = vec![Bounded::exact(Float::with_val(bits, 1))];
    for i in 1..=(k - j) as usize {
        powers.push(powers[i - 1].mul(beta_minus_gamma));
    }
    let mut acc = Bounded::exact(Float::with_val(bits, 0));
    for m in 0..=(k - j) {
        let r = k - m - j;
        // k!/(m! j! r!) · m! = k!/(j! r!)
        let w = Float::with_val(bits, factorial(bits, k) / factorial(bits, j)) / factorial(bits, r);
        acc = acc.add(&powers[r as usize].mul(&g[m as usize]).scale(&w));
    }
    Ok(acc)
}

/// `1/Γ(w+1)` for `|w| ≤ 1/2` from the Taylor data. `|g_m| ≤ 2` by Cauchy's
/// estimate on the unit circle (where `|1/Γ(1+z)| ≤ 1.93`), so the terms past
/// `M` contribute at most `4·2^{-M}`.
fn inv_gamma_small(w: &Real, g: &[Bounded]) -> Bounded {
    let bits = g[0].prec();
    let mut acc = Bounded::exact(Float::with_val(bits, 0));
    for c in g.iter().rev() {
        acc = acc.scale(w).add(c);
    }
    let tail = Float::with_val(64, 4) >> (g.len() as i32 - 1);
    acc.with_extra_err(&tail)
}

/// `G(z) = e^{(β−γ)z}/Γ(z+1)` for real `z`.
///
/// Writes `z = n + w` with `n` the nearest integer and uses
/// `Γ(w+1+n) = Γ(w+1)·Π_{i=1}^n (w+i)` for `n ≥ 0`, or
/// `1/Γ(w+1+n) = (1/Γ(w+1))·Π_{i=n+1}^{0} (w+i)` for `n < 0`. At the poles of
/// `Γ(z+1)` (z a negative integer) the product contains the factor `w = 0`,
/// so `G` evaluates to exactly 0 there.
pub fn g_eval(z: &Real, beta_minus_gamma: &Bounded, g: &[Bounded]) -> Result<Bounded> {
    if !z.is_finite() {
        return Err(Error::Domain("G(z) needs finite z".into()));
    }
    if z.to_f64().abs() > 1e6 {
        return Err(Error::Resource(format!("G(z) for |z| = {} is out of range", z.to_f64())));
    }
    let bits = beta_minus_gamma.prec();
    let n = z.to_f64().round() as i64;
    let w = Float::with_val(bits, z - n);
    let mut inv = inv_gamma_small(&w, g);
    if n >= 0 {
        for i in 1..=n {
            let f = Float::with_val(bits, &w + i);
            let r = Float::with_val(bits, 1) / &f;
            inv = inv.scale(&r);
        }
    } else {
        for i in (n + 1)..=0 {
            let f = Float::with_val(bits, &w + i);
            inv = inv.scale(&f);
        }
    }
    // e^{(β−γ)z}: relative error |z|·err(β−γ), plus rounding.
    let arg = Float::with_val(bits, &beta_minus_gamma.value * z);
    let e = arg.exp();
    let rel = Float::with_val(64, z.abs_ref()) * &beta_minus_gamma.err * 2u32;
    let e_err = Float::with_val(64, &e) * rel + ulp_of(&e);
    Ok(inv.mul(&Bounded::exact(e).with_extra_err(&e_err)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Engine;
    use crate::precision::Precision;

    fn setup(m: u32) -> (Engine, Bounded, BTreeMap<u32, Bounded>) {
        let e = Engine::new(Precision::new(50).unwrap()).unwrap();
        let gamma = e.gamma();
        let zeta = (2..=m).map(|j| (j, e.zeta(j).unwrap())).collect();
        (e, gamma, zeta)
    }

    fn close(a: &Real, b: &Real, tol: f64) -> bool {
        Float::with_val(64, a - b).abs() < tol
    }

    #[test]
    fn taylor_low_orders() {
        let (_, gamma, zeta) = setup(20);
        let g = inv_gamma_taylor(&gamma, &zeta, 20).unwrap();
        assert_eq!(g[0].value, 1);
        assert!(close(&g[1].value, &gamma.value, 1e-60));
        let g2 = Float::with_val(300, &gamma.value * &gamma.value) / 2u32
            - Float::with_val(300, &zeta[&2].value / 2u32);
        assert!(close(&g[2].value, &g2, 1e-55));
    }

    #[test]
    fn taylor_series_reproduces_mpfr_gamma() {
        let (e, gamma, _) = setup(2);
        let bits = e.bits();
        let zeta: BTreeMap<u32, Bounded> = (2..=bits + 4).map(|j| (j, e.zeta(j).unwrap())).collect();
        let g = inv_gamma_taylor(&gamma, &zeta, bits + 4).unwrap();
        for w in [-0.5f64, -0.3, 0.1, 0.25, 0.5] {
            let wf = Float::with_val(bits, w);
            let ours = inv_gamma_small(&wf, &g);
            let mpfr = Float::with_val(bits, Float::with_val(bits, &wf + 1u32).gamma()).recip();
            assert!(close(&ours.value, &mpfr, 1e-55), "w = {w}");
            assert!(ours.err < 1e-55);
        }
    }

    #[test]
    fn qihu_small_values_and_gamma_relation() {
        let (_, gamma, zeta) = setup(16);
        let a = qihu_a(&zeta, 12).unwrap();
        assert_eq!(a[0].value, 1);
        assert!(a[1].value.is_zero());
        assert!(close(&a[2].value, &Float::with_val(300, -&zeta[&2].value), 1e-60));
        // a_m = Σ_i C(m,i)(−γ)^{m−i} (1/Γ)^{(i)}(1)
        let g = inv_gamma_taylor(&gamma, &zeta, 12).unwrap();
        let bits = gamma.prec();
        for m in 0..=12u32 {
            let mut s = Float::with_val(bits, 0);
            for i in 0..=m {
                let mg = Float::with_val(bits, -&gamma.value);
                let pw = Float::with_val(bits, rug::ops::Pow::pow(mg, m - i));
                s += binomial(bits, m, i) * pw * factorial(bits, i) * &g[i as usize].value;
            }
            assert!(close(&a[m as usize].value, &s, 1e-45), "m = {m}");
        }
        let b = qihu_b(&a);
        assert!(close(&b[2].value, &Float::with_val(300, &a[2].value / 2u32), 1e-60));
    }

    #[test]
    fn lambda_basic_values() {
        let (e, gamma, zeta) = setup(12);
        let beta = crate::constants::mertens_beta(&e).unwrap();
        let bmg = beta.sub(&gamma);
        let g = inv_gamma_taylor(&gamma, &zeta, 12).unwrap();
        assert_eq!(tenenbaum_lambda(0, 0, &bmg, &g).unwrap().value, 1);
        assert!(close(&tenenbaum_lambda(0, 1, &bmg, &g).unwrap().value, &beta.value, 1e-60));
        for k in 0..=10 {
            assert!(close(&tenenbaum_lambda(k, k, &bmg, &g).unwrap().value, &Float::with_val(64, 1), 1e-60));
        }
        assert!(matches!(tenenbaum_lambda(3, 2, &bmg, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn g_at_integers_and_poles() {
        let (e, gamma, _) = setup(2);
        let bits = e.bits();
        let zeta: BTreeMap<u32, Bounded> = (2..=bits + 4).map(|j| (j, e.zeta(j).unwrap())).collect();
        let g = inv_gamma_taylor(&gamma, &zeta, bits + 4).unwrap();
        let beta = crate::constants::mertens_beta(&e).unwrap();
        let bmg = beta.sub(&gamma);
        let at = |z: f64| g_eval(&Float::with_val(bits, z), &bmg, &g).unwrap();
        assert!(close(&at(0.0).value, &Float::with_val(64, 1), 1e-60));
        let e1 = Float::with_val(bits, bmg.value.exp_ref());
        assert!(close(&at(1.0).value, &e1, 1e-55));
        let e2 = Float::with_val(bits, &e1 * &e1) / 2u32;
        assert!(close(&at(2.0).value, &e2, 1e-55));
        assert!(at(-1.0).value.is_zero());
        assert!(at(-3.0).value.is_zero());
        // Non-integer point against MPFR's Γ.
        let z = Float::with_val(bits, 3.7);
        let expect = Float::with_val(bits, &bmg.value * &z).exp()
            / Float::with_val(bits, Float::with_val(bits, &z + 1u32).gamma());
        assert!(close(&at(3.7).value, &expect, 1e-50));
    }
}
