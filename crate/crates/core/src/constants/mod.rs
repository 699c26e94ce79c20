//! Scalar constant families: ζ, P, β, c_j, ν_k, ν*_k, d_k, 1/Γ Taylor data,
//! Qi–Hu a_j, Tenenbaum λ_{j,k}, the Euler-product constants β_p, δ_p and α₁.
//!
//! Every value is a [`Bounded`]: a float together with an upper bound on its
//! absolute error, accumulated from series truncation bounds and per-operation
//! rounding.

mod alpha;
mod euler;
pub mod export;
mod gamma;
mod mertens;
mod prime_zeta;
pub mod zeta;

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::float::Round;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{euler_gamma, Precision, Real};
use crate::sieve::primes_up_to;

pub use alpha::{alpha1_closed_form, alpha1_prime_zeta_route, alpha1_prime_partial_sum};
pub use euler::{euler_product_constants, EulerPair};
pub use gamma::{g_eval, inv_gamma_taylor, qihu_a, qihu_b, tenenbaum_lambda};
pub use mertens::{
    beta_split_route, c_coefficients, d_sequence, d_via_partitions, mertens_beta, nu_sequence,
    nu_via_partitions,
};
pub use prime_zeta::{mobius, prime_zeta_direct, prime_zeta_split};

/// Precision of the error-bound floats. Only their magnitude matters.
const ERR_BITS: u32 = 64;

/// A value with a certified bound on its absolute error.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounded {
    pub value: Real,
    pub err: Float,
}

fn up(x: Float) -> Float {
    Float::with_val_round(ERR_BITS, x, Round::Up).0
}

/// `|v| · 2^{1−prec(v)}`, one rounding's worth of error.
fn ulp_of(v: &Float) -> Float {
    let mut e = up(Float::with_val(ERR_BITS, v.abs_ref()));
    e >>= v.prec() as i32 - 1;
    e
}

impl Bounded {
    pub fn exact(value: Real) -> Self {
        Bounded {
            value,
            err: Float::with_val(ERR_BITS, 0),
        }
    }

    pub fn new(value: Real, err: impl Into<f64>) -> Self {
        Bounded {
            value,
            err: up(Float::with_val(ERR_BITS, err.into())),
        }
    }

    /// Error given by its natural logarithm, so that bounds far below the
    /// f64 range are still representable.
    pub fn from_log_err(value: Real, log_err: f64) -> Self {
        let err = up(Float::with_val(ERR_BITS, log_err).exp());
        let mut b = Bounded { value, err };
        let ulp = ulp_of(&b.value);
        b.err += ulp;
        b
    }

    pub fn with_extra_err(mut self, extra: &Float) -> Self {
        self.err += extra;
        self
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    pub fn add(&self, o: &Bounded) -> Bounded {
        let value = Float::with_val(self.prec(), &self.value + &o.value);
        let err = up(Float::with_val(ERR_BITS, &self.err + &o.err)) + ulp_of(&value);
        Bounded { value, err }
    }

    pub fn sub(&self, o: &Bounded) -> Bounded {
        let value = Float::with_val(self.prec(), &self.value - &o.value);
        let err = up(Float::with_val(ERR_BITS, &self.err + &o.err)) + ulp_of(&value);
        Bounded { value, err }
    }

    pub fn neg(&self) -> Bounded {
        Bounded {
            value: Float::with_val(self.prec(), -&self.value),
            err: self.err.clone(),
        }
    }

    pub fn mul(&self, o: &Bounded) -> Bounded {
        let value = Float::with_val(self.prec(), &self.value * &o.value);
        let a = Float::with_val(ERR_BITS, self.value.abs_ref());
        let b = Float::with_val(ERR_BITS, o.value.abs_ref());
        let mut err = up(Float::with_val(ERR_BITS, &a * &o.err));
        err += up(Float::with_val(ERR_BITS, &b * &self.err));
        err += up(Float::with_val(ERR_BITS, &self.err * &o.err));
        err += ulp_of(&value);
        Bounded { value, err }
    }

    /// Multiplication by an exactly known real.
    pub fn scale(&self, s: &Real) -> Bounded {
        let value = Float::with_val(self.prec(), &self.value * s);
        let mut err = up(Float::with_val(ERR_BITS, s.abs_ref()) * &self.err);
        err += ulp_of(&value);
        Bounded { value, err }
    }

    pub fn div_u(&self, d: u32) -> Bounded {
        let value = Float::with_val(self.prec(), &self.value / d);
        let err = up(Float::with_val(ERR_BITS, &self.err / d)) + ulp_of(&value);
        Bounded { value, err }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn err_f64(&self) -> f64 {
        self.err.to_f64()
    }
}

/// Options for [`Engine`].
#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    /// Primes up to this bound are handled term by term; larger ones go
    /// through prime-zeta tails.
    pub prime_cutoff: u64,
    /// Bits carried on top of `Precision::bits()`.
    pub extra_bits: u32,
}

pub const DEFAULT_PRIME_CUTOFF: u64 = 10_000;

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            prime_cutoff: DEFAULT_PRIME_CUTOFF,
            extra_bits: 0,
        }
    }
}

/// Shared state for constant evaluation: ζ(t) for all `t` the series at this
/// precision can touch, computed eagerly, plus the primes below the cutoff.
/// Immutable after construction, so safe to share across threads.
#[derive(Debug, Clone)]
pub struct Engine {
    prec: Precision,
    bits: u32,
    zeta: Vec<Bounded>,
    primes: Vec<u64>,
    cutoff: u64,
}

impl Engine {
    pub fn new(prec: Precision) -> Result<Self> {
        Self::with_options(prec, EngineOptions::default())
    }

    pub fn with_options(prec: Precision, opts: EngineOptions) -> Result<Self> {
        if opts.prime_cutoff < 100 {
            return Err(Error::Config(format!(
                "prime cutoff must be at least 100, got {}",
                opts.prime_cutoff
            )));
        }
        let bits = prec.bits() + opts.extra_bits;
        let t_max = bits + 16;
        let mut zeta = vec![Bounded::exact(Float::with_val(bits, 0)); 2];
        let computed = (2..=t_max)
            .into_par_iter()
            .map(|t| zeta::zeta_int(t, bits))
            .collect::<Result<Vec<_>>>()?;
        zeta.extend(computed);
        let primes = primes_up_to(opts.prime_cutoff)?;
        Ok(Engine {
            prec,
            bits,
            zeta,
            primes,
            cutoff: opts.prime_cutoff,
        })
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub(crate) fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Largest `t` with ζ(t) cached; beyond it ζ(t) − 1 < 2^{-bits-14}.
    pub(crate) fn t_max(&self) -> u32 {
        self.zeta.len() as u32 - 1
    }

    pub fn gamma(&self) -> Bounded {
        let g = euler_gamma(self.bits);
        let ulp = ulp_of(&g);
        Bounded::exact(g).with_extra_err(&ulp)
    }

    pub fn zeta(&self, j: u32) -> Result<Bounded> {
        if j < 2 {
            return Err(Error::Domain(format!("zeta needs j >= 2, got {j}")));
        }
        match self.zeta.get(j as usize) {
            Some(z) => Ok(z.clone()),
            None => zeta::zeta_int(j, self.bits),
        }
    }

    /// `2^-bits`, the target absolute error of every primitive series.
    pub(crate) fn tol(&self) -> Float {
        Float::with_val(ERR_BITS, 1) >> self.bits as i32
    }
}

/// Sizes of the tabulated families.
#[derive(Debug, Clone)]
pub struct TableSizes {
    pub j_max: u32,
    pub nu_max: u32,
    pub nu_star_max: u32,
    pub d_max: u32,
    pub taylor_max: u32,
    pub euler_primes: Vec<u64>,
}

impl Default for TableSizes {
    fn default() -> Self {
        TableSizes {
            j_max: 40,
            nu_max: 40,
            nu_star_max: 20,
            d_max: 40,
            taylor_max: 40,
            euler_primes: vec![2, 3, 5, 7],
        }
    }
}

/// All scalar constant families at one precision.
#[derive(Debug, Clone)]
pub struct ConstantsTable {
    pub precision: Precision,
    pub sizes: TableSizes,
    pub gamma: Bounded,
    pub beta: Bounded,
    pub zeta: BTreeMap<u32, Bounded>,
    pub prime_zeta: BTreeMap<u32, Bounded>,
    pub c: BTreeMap<u32, Bounded>,
    pub c_star: BTreeMap<u32, Bounded>,
    pub nu: BTreeMap<u32, Bounded>,
    pub nu_star: BTreeMap<u32, Bounded>,
    pub d: BTreeMap<u32, Bounded>,
    pub inv_gamma_taylor: BTreeMap<u32, Bounded>,
    pub qihu_a: BTreeMap<u32, Bounded>,
    pub beta_p: BTreeMap<u64, Bounded>,
    pub delta_p: BTreeMap<u64, Bounded>,
    pub alpha1: Bounded,
}

fn indexed(v: Vec<Bounded>, from: u32) -> BTreeMap<u32, Bounded> {
    v.into_iter()
        .enumerate()
        .map(|(i, b)| (i as u32 + from, b))
        .collect()
}

impl ConstantsTable {
    pub fn compute(prec: Precision) -> Result<Self> {
        Self::compute_with(prec, &TableSizes::default())
    }

    pub fn compute_with(prec: Precision, sizes: &TableSizes) -> Result<Self> {
        let engine = Engine::new(prec)?;
        let j_max = sizes
            .j_max
            .max(sizes.nu_max)
            .max(sizes.nu_star_max)
            .max(sizes.d_max)
            .max(sizes.taylor_max)
            .max(2);
        let gamma = engine.gamma();
        let beta = mertens_beta(&engine)?;
        let zeta = (2..=j_max)
            .map(|j| Ok((j, engine.zeta(j)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let prime_zeta = (2..=j_max)
            .map(|j| Ok((j, engine.prime_zeta(j)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let (c, c_star) = c_coefficients(&engine, &beta, j_max)?;
        let nu = indexed(nu_sequence(&c, sizes.nu_max)?, 0);
        let nu_star = indexed(nu_sequence(&c_star, sizes.nu_star_max)?, 0);
        let d = indexed(d_sequence(&prime_zeta, sizes.d_max)?, 0);
        // G(z) needs enough Taylor terms for full precision on |w| ≤ 1/2.
        let taylor_len = sizes.taylor_max.max(engine.bits() + 4);
        let zeta_long = (2..=taylor_len)
            .map(|j| Ok((j, engine.zeta(j)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let inv_gamma = indexed(inv_gamma_taylor(&gamma, &zeta_long, taylor_len)?, 0);
        let qihu = indexed(qihu_a(&zeta, sizes.taylor_max)?, 0);

        let pairs = sizes
            .euler_primes
            .par_iter()
            .map(|&p| euler_product_constants(p, prec).map(|pair| (p, pair)))
            .collect::<Result<Vec<_>>>()?;
        let mut beta_p = BTreeMap::new();
        let mut delta_p = BTreeMap::new();
        for (p, pair) in pairs {
            beta_p.insert(p, pair.beta_p);
            delta_p.insert(p, pair.delta_p);
        }
        let alpha1 = alpha1_closed_form(&engine)?;

        Ok(ConstantsTable {
            precision: prec,
            sizes: sizes.clone(),
            gamma,
            beta,
            zeta,
            prime_zeta,
            c,
            c_star,
            nu,
            nu_star,
            d,
            inv_gamma_taylor: inv_gamma,
            qihu_a: qihu,
            beta_p,
            delta_p,
            alpha1,
        })
    }

    pub fn bits(&self) -> u32 {
        self.beta.prec()
    }

    fn lookup<'a, K: Ord + Copy + std::fmt::Display>(
        map: &'a BTreeMap<K, Bounded>,
        key: K,
        what: &str,
    ) -> Result<&'a Bounded> {
        map.get(&key)
            .ok_or_else(|| Error::Config(format!("{what}[{key}] is not tabulated")))
    }

    pub fn zeta_at(&self, j: u32) -> Result<&Bounded> {
        Self::lookup(&self.zeta, j, "zeta")
    }

    pub fn prime_zeta_at(&self, j: u32) -> Result<&Bounded> {
        Self::lookup(&self.prime_zeta, j, "prime_zeta")
    }

    pub fn nu_at(&self, k: u32) -> Result<&Bounded> {
        Self::lookup(&self.nu, k, "nu")
    }

    pub fn qihu_a_at(&self, j: u32) -> Result<&Bounded> {
        Self::lookup(&self.qihu_a, j, "qihu_a")
    }

    pub fn inv_gamma_at(&self, m: u32) -> Result<&Bounded> {
        Self::lookup(&self.inv_gamma_taylor, m, "inv_gamma_taylor")
    }

    pub fn beta_p_at(&self, p: u64) -> Result<&Bounded> {
        Self::lookup(&self.beta_p, p, "beta_p")
    }

    /// `β − γ`, the exponent rate of `G(z)`.
    pub fn beta_minus_gamma(&self) -> Bounded {
        self.beta.sub(&self.gamma)
    }

    pub fn lambda(&self, j: u32, k: u32) -> Result<Bounded> {
        let g: Vec<Bounded> = self.inv_gamma_taylor.values().cloned().collect();
        tenenbaum_lambda(j, k, &self.beta_minus_gamma(), &g)
    }

    pub fn g_eval(&self, z: &Real) -> Result<Bounded> {
        let g: Vec<Bounded> = self.inv_gamma_taylor.values().cloned().collect();
        g_eval(z, &self.beta_minus_gamma(), &g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_arithmetic_tracks_errors() {
        let a = Bounded::new(Float::with_val(100, 2), 1e-10);
        let b = Bounded::new(Float::with_val(100, 3), 1e-12);
        let p = a.mul(&b);
        assert_eq!(p.value, 6);
        assert!(p.err >= 3e-10 + 2e-12);
        let s = a.sub(&b);
        assert_eq!(s.value, -1);
        assert!(s.err >= 1e-10);
    }

    #[test]
    fn engine_caches_zeta() {
        let e = Engine::new(Precision::new(20).unwrap()).unwrap();
        assert!(e.t_max() > e.bits());
        let z2 = e.zeta(2).unwrap();
        assert!((z2.to_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
        assert!(e.zeta(1).is_err());
    }
}
