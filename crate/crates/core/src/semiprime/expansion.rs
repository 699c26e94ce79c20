use rug::ops::Pow;
use rug::Float;

use super::AlphaTable;
use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::precision::Real;
use crate::sieve::LEDGER_BITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum R2Variant {
    /// `𝓡₂`, all semiprimes.
    All,
    /// `𝓡₂*`, squarefree semiprimes only.
    Squarefree,
}

/// `log x` and `log log x`; needs `x > 1`.
pub(crate) fn logs(x: &Real) -> Result<(Real, Real)> {
    if !x.is_finite() || *x <= 1 {
        return Err(Error::Domain(format!("expansion needs x > 1, got {x}")));
    }
    let l = Float::with_val(LEDGER_BITS.max(x.prec()), x.ln_ref());
    let ll = Float::with_val(l.prec(), l.ln_ref());
    Ok((l, ll))
}

/// `(P(2) − ζ(2))/2` for `𝓡₂`, `−(P(2) + ζ(2))/2` for `𝓡₂*`.
pub(crate) fn r2_constant(tbl: &ConstantsTable, variant: R2Variant) -> Result<Real> {
    let p2 = &tbl.prime_zeta_at(2)?.value;
    let z2 = &tbl.zeta_at(2)?.value;
    let b = LEDGER_BITS;
    Ok(match variant {
        R2Variant::All => Float::with_val(b, p2 - z2) / 2u32,
        R2Variant::Squarefree => -(Float::with_val(b, p2 + z2) / 2u32),
    })
}

/// `½(log log x + β)² + c + Σ_{1≤j≤N} α_j / log^j x`, without the error term.
pub fn r2_expansion(
    x: &Real,
    n: u32,
    tbl: &ConstantsTable,
    at: &AlphaTable,
    variant: R2Variant,
) -> Result<Real> {
    let (l, ll) = logs(x)?;
    let big_x = Float::with_val(l.prec(), &ll + &at.beta);
    let mut v = Float::with_val(l.prec(), big_x.square_ref()) / 2u32;
    v += r2_constant(tbl, variant)?;
    for j in 1..=n {
        v += Float::with_val(l.prec(), &at.alpha(j)?.value / Float::with_val(l.prec(), (&l).pow(j)));
    }
    Ok(v)
}

/// `(x/log x) Σ_{n<N} n! (log log x + D_n)/log^n x`, without the error term.
pub fn n2_expansion(x: &Real, n: u32, at: &AlphaTable) -> Result<Real> {
    let (l, ll) = logs(x)?;
    let p = l.prec();
    let mut sum = Float::with_val(p, 0);
    let mut fact = Float::with_val(p, 1);
    let mut lpow = Float::with_val(p, 1);
    for m in 0..n {
        if m > 0 {
            fact *= m;
            lpow *= &l;
        }
        let term = Float::with_val(p, &ll + at.d(m)?) * &fact / &lpow;
        sum += term;
    }
    Ok(sum * Float::with_val(p, x / &l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Precision;
    use crate::semiprime::{AlphaSource, Estimate, TailStatus};
    use std::collections::BTreeMap;

    fn setup() -> (ConstantsTable, AlphaTable) {
        let tbl = ConstantsTable::compute(Precision::new(20).unwrap()).unwrap();
        let mut alpha = BTreeMap::new();
        alpha.insert(
            1,
            Estimate {
                value: Float::with_val(LEDGER_BITS, &tbl.alpha1.value),
                err: Float::with_val(64, 0),
                tail: TailStatus::Certified,
                source: AlphaSource::ClosedForm,
            },
        );
        let at = AlphaTable {
            beta: Float::with_val(LEDGER_BITS, &tbl.beta.value),
            cutoff: 0,
            gamma: BTreeMap::new(),
            alpha,
        };
        (tbl, at)
    }

    #[test]
    fn r2_at_e_to_the_e() {
        let (tbl, at) = setup();
        let x = Float::with_val(LEDGER_BITS, 1).exp().exp();
        let v = r2_expansion(&x, 0, &tbl, &at, R2Variant::All).unwrap();
        let b = tbl.beta.to_f64();
        let c = (tbl.prime_zeta[&2].to_f64() - tbl.zeta[&2].to_f64()) / 2.0;
        assert!((v.to_f64() - ((1.0 + b).powi(2) / 2.0 + c)).abs() < 1e-14);
        let s = r2_expansion(&x, 0, &tbl, &at, R2Variant::Squarefree).unwrap();
        let c_star = -(tbl.prime_zeta[&2].to_f64() + tbl.zeta[&2].to_f64()) / 2.0;
        assert!((s.to_f64() - ((1.0 + b).powi(2) / 2.0 + c_star)).abs() < 1e-14);
        assert!(r2_expansion(&x, 2, &tbl, &at, R2Variant::All).is_err());
        assert!(r2_expansion(&Float::with_val(64, 1), 0, &tbl, &at, R2Variant::All).is_err());
    }

    #[test]
    fn n2_first_term_and_d1() {
        let (tbl, at) = setup();
        let x = Float::with_val(LEDGER_BITS, 1e8);
        let l = 1e8f64.ln();
        let v = n2_expansion(&x, 1, &at).unwrap().to_f64();
        let want = 1e8 / l * (l.ln() + tbl.beta.to_f64());
        assert!((v / want - 1.0).abs() < 1e-13);
        let d1 = at.d(1).unwrap().to_f64();
        assert!((d1 - (tbl.beta.to_f64() - tbl.alpha1.to_f64() - 1.0)).abs() < 1e-14);
    }
}
