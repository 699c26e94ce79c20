//! Semiprime constants `γ_j`, `α_j`, `B_j`, `D_n` and the refined
//! `𝓡₂`, `𝓡₂*`, `𝓝₂` expansions.
//!
//! `γ_j = ∫_2^∞ E(t) log^{j−1} t dt/t` is evaluated on `[2, X]` in closed
//! form. Partial summation over the primes gives, with `L = log X`,
//! `M_j = Σ_{p≤X} log^j p/p` and `T = Σ_{p≤X} 1/p`,
//!
//! ```text
//! ∫_2^X E(t) log^{j−1}t dt/t = (1/j)[ T·L^j − L^j log L − β L^j + L^j/j
//!                                     + log^j 2 (log log 2 + β − 1/j) − M_j ]
//! ```
//!
//! which is exact: `E` jumps by `1/p` at each prime and drifts smoothly in
//! between, and both pieces are integrated analytically. Only the tail past
//! `X` is estimated.

mod checks;
mod expansion;
mod table;

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::precision::{ln2, Real};
use crate::sieve::{SumLedger, LEDGER_BITS};

pub use checks::{
    ratio_table_check, r2_window_check, explicit_r2_check, explicit_r2_star_check,
    rs_dusart_check, x0_two, BoundGridRow, R2_STAR_UPPER_FROM,
};
pub use expansion::{n2_expansion, r2_expansion, R2Variant};
pub use table::{parse_alpha_table, ReferenceAlphaRow, ReferenceAlphaTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    ClosedForm,
    LimitRoute,
    IntegralRoute,
    ReferenceTable,
}

/// Whether an error bar rests only on proven bounds for `E(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailStatus {
    Certified,
    /// Assumes `|E(t)| ≤ 0.2/log^{j+1} t` past the cutoff, which the
    /// available explicit bounds do not provide.
    Assumed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: Real,
    pub err: Real,
    pub tail: TailStatus,
    pub source: AlphaSource,
}

/// `|E(x)| ≤ 1/(10 log²x) + 4/(15 log³x)` from here on.
pub const DUSART_D1_FROM: u64 = 10_372;
/// `|E(x)| ≤ 0.2/log³x` from here on.
pub const DUSART_D2_FROM: u64 = 2_278_383;
/// `E(x) > 0` is known up to here.
pub const POSITIVE_E_UPTO: u64 = 100_000_000;

/// Bound on `∫_X^∞ |E(t)| log^{j−1} t dt/t`.
fn tail_bound(j: u32, x: u64) -> (f64, TailStatus) {
    let l = (x as f64).ln();
    let assumed = (0.2 / l, TailStatus::Assumed);
    if x >= DUSART_D2_FROM {
        match j {
            1 => (0.1 / (l * l), TailStatus::Certified),
            2 => (0.2 / l, TailStatus::Certified),
            _ => assumed,
        }
    } else if x >= DUSART_D1_FROM {
        match j {
            1 => (0.1 / l + (4.0 / 15.0) / (2.0 * l * l), TailStatus::Certified),
            _ => assumed,
        }
    } else {
        match j {
            1 => (1.0 / l, TailStatus::Certified),
            _ => assumed,
        }
    }
}

fn moment(ledger: &SumLedger, j: u32, x: u64) -> Result<Real> {
    if j == 0 {
        return Err(Error::Domain("moment order starts at 1".into()));
    }
    if j > ledger.logp_moments {
        return Err(Error::Config(format!(
            "log-moment of order {j} requested but the ledger keeps {}",
            ledger.logp_moments
        )));
    }
    let rec = ledger
        .at(x)
        .ok_or_else(|| Error::Precondition(format!("no ledger checkpoint at x = {x}")))?;
    Ok(rec.logp_moments[j as usize - 1].clone())
}

/// `γ_j` from sieve data up to `cutoff`, with the tail past the cutoff as the error bar.
pub fn gamma_j_integral(j: u32, cutoff: u64, ledger: &SumLedger, beta: &Real) -> Result<Estimate> {
    let m = moment(ledger, j, cutoff)?;
    let rec = ledger.at(cutoff).expect("checked by moment");
    let b = LEDGER_BITS;
    let l = Float::with_val(b, cutoff).ln();
    let lj = Float::with_val(b, (&l).pow(j));
    let ll = Float::with_val(b, l.ln_ref());
    let l2 = ln2(b);
    let l2j = Float::with_val(b, (&l2).pow(j));
    let inv_j = Float::with_val(b, 1) / j;

    let mut s = Float::with_val(b, &rec.t * &lj);
    s -= Float::with_val(b, &lj * &ll);
    s -= Float::with_val(b, beta * &lj);
    s += Float::with_val(b, &lj * &inv_j);
    let inner = Float::with_val(b, l2.ln_ref()) + beta - &inv_j;
    s += l2j * inner;
    s -= &m;
    let value = s / j;

    // Moments are summed from f64 logarithms: relative error ≤ (j + 2)·4e-16 per term.
    let numeric = m.to_f64() * (j as f64 + 2.0) * 4e-16 / j as f64;
    let (tail, status) = tail_bound(j, cutoff);
    Ok(Estimate {
        value,
        err: Float::with_val(64, tail + numeric),
        tail: status,
        source: AlphaSource::IntegralRoute,
    })
}

/// `(log 2)^j (1/j − log log 2 − β)/j`, the elementary part of `α_j − γ_j`.
pub fn alpha_gamma_offset(j: u32, beta: &Real) -> Real {
    let b = beta.prec().max(LEDGER_BITS);
    let l2 = ln2(b);
    let mut c = Float::with_val(b, 1) / j;
    c -= Float::with_val(b, l2.ln_ref());
    c -= beta;
    Float::with_val(b, l2.pow(j)) * c / j
}

/// `(1/j)(log^j x/j − Σ_{p≤x} log^j p/p)`, which tends to `α_j` as `x → ∞`.
pub fn alpha_j_limit(j: u32, x: u64, ledger: &SumLedger) -> Result<Real> {
    let m = moment(ledger, j, x)?;
    let l = Float::with_val(LEDGER_BITS, x).ln();
    let lead = Float::with_val(LEDGER_BITS, l.pow(j)) / j;
    Ok((lead - m) / j)
}

/// `γ_j`, `α_j`, `B_j`, `D_n` for `1 ≤ j ≤ j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaTable {
    pub beta: Real,
    pub cutoff: u64,
    pub gamma: BTreeMap<u32, Estimate>,
    pub alpha: BTreeMap<u32, Estimate>,
}

impl AlphaTable {
    /// `α₁` comes from the prime-sum closed form; `α_j`, `j ≥ 2`, from `γ_j`.
    pub fn build(tbl: &ConstantsTable, ledger: &SumLedger, cutoff: u64, j_max: u32) -> Result<Self> {
        let beta = Float::with_val(LEDGER_BITS, &tbl.beta.value);
        let mut gamma = BTreeMap::new();
        let mut alpha = BTreeMap::new();
        for j in 1..=j_max {
            let g = gamma_j_integral(j, cutoff, ledger, &beta)?;
            let a = if j == 1 {
                Estimate {
                    value: Float::with_val(LEDGER_BITS, &tbl.alpha1.value),
                    err: tbl.alpha1.err.clone(),
                    tail: TailStatus::Certified,
                    source: AlphaSource::ClosedForm,
                }
            } else {
                Estimate {
                    value: alpha_gamma_offset(j, &beta) + &g.value,
                    err: g.err.clone(),
                    tail: g.tail,
                    source: AlphaSource::IntegralRoute,
                }
            };
            gamma.insert(j, g);
            alpha.insert(j, a);
        }
        Ok(AlphaTable {
            beta,
            cutoff,
            gamma,
            alpha,
        })
    }

    pub fn alpha(&self, j: u32) -> Result<&Estimate> {
        self.alpha
            .get(&j)
            .ok_or_else(|| Error::Config(format!("alpha_{j} is not available")))
    }

    /// `B_0 = β`, `B_j = −j α_j`.
    pub fn b(&self, j: u32) -> Result<Real> {
        if j == 0 {
            return Ok(self.beta.clone());
        }
        Ok(-Float::with_val(LEDGER_BITS, &self.alpha(j)?.value * j))
    }

    /// `H_n`, with `H_0 = 0`.
    pub fn harmonic(n: u32) -> Real {
        let mut h = Float::with_val(LEDGER_BITS, 0);
        for i in 1..=n {
            h += Float::with_val(LEDGER_BITS, 1) / i;
        }
        h
    }

    /// `D_n = Σ_{j≤n} B_j/j! − H_n`.
    pub fn d(&self, n: u32) -> Result<Real> {
        let mut acc = Float::with_val(LEDGER_BITS, 0);
        let mut fact = Float::with_val(LEDGER_BITS, 1);
        for j in 0..=n {
            if j > 0 {
                fact *= j;
            }
            acc += self.b(j)? / &fact;
        }
        Ok(acc - Self::harmonic(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{accumulate, SieveConfig};

    fn beta() -> Real {
        Float::with_val(
            LEDGER_BITS,
            Float::parse("0.26149721284764278375542683860869585905156664826120").unwrap(),
        )
    }

    /// E on (2, 3) is T(2) − log log t − β = 1/2 − log log t − β, so the
    /// `j = 1` integral over `[2, 3]` is elementary.
    #[test]
    fn first_gap_integral_by_quadrature() {
        let mut cfg = SieveConfig::new(100_000, vec![3, 100_000]);
        cfg.segment_size = 1 << 16;
        let (ledger, _) = accumulate(&cfg, &beta()).unwrap();
        let g = gamma_j_integral(1, 3, &ledger, &beta()).unwrap();
        // The jump at 3 sits on the endpoint and adds nothing; midpoint rule in u = log t.
        let n = 200_000;
        let (a, b) = (2f64.ln(), 3f64.ln());
        let h = (b - a) / n as f64;
        let mut quad = 0.0;
        for i in 0..n {
            let u = a + (i as f64 + 0.5) * h;
            quad += (0.5 - u.ln() - beta().to_f64()) * h;
        }
        assert!((g.value.to_f64() - quad).abs() < 1e-9, "{} vs {quad}", g.value);
    }

    #[test]
    fn limit_route_tracks_alpha1() {
        let mut cfg = SieveConfig::new(2_000_000, vec![10_000, 2_000_000]);
        cfg.segment_size = 1 << 20;
        let (ledger, _) = accumulate(&cfg, &beta()).unwrap();
        let far = alpha_j_limit(1, 2_000_000, &ledger).unwrap().to_f64();
        let near = alpha_j_limit(1, 10_000, &ledger).unwrap().to_f64();
        assert!((far - 1.332582).abs() < (near - 1.332582).abs());
        assert!((far - 1.332582).abs() < 1e-3);
        assert!(matches!(alpha_j_limit(9, 10_000, &ledger), Err(Error::Config(_))));
    }

    #[test]
    fn gamma1_relation_with_alpha1() {
        let mut cfg = SieveConfig::new(3_000_000, vec![3_000_000]);
        cfg.segment_size = 1 << 20;
        let (ledger, _) = accumulate(&cfg, &beta()).unwrap();
        let g = gamma_j_integral(1, 3_000_000, &ledger, &beta()).unwrap();
        assert_eq!(g.tail, TailStatus::Certified);
        let a = alpha_gamma_offset(1, &beta()) + &g.value;
        assert!((a.to_f64() - 1.332582).abs() < g.err.to_f64() + 1e-6);
        let g3 = gamma_j_integral(3, 3_000_000, &ledger, &beta()).unwrap();
        assert_eq!(g3.tail, TailStatus::Assumed);
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(AlphaTable::harmonic(0), 0);
        assert!((AlphaTable::harmonic(3).to_f64() - 11.0 / 6.0).abs() < 1e-15);
    }
}
