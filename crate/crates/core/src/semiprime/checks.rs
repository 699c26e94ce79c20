use rug::ops::Pow;
use rug::Float;

use super::expansion::{logs, r2_expansion, R2Variant};
use super::table::ReferenceAlphaTable;
use super::{AlphaTable, DUSART_D1_FROM, DUSART_D2_FROM, POSITIVE_E_UPTO};
use crate::constants::ConstantsTable;
use crate::error::Result;
use crate::precision::Real;
use crate::report::{CheckReport, CheckRow};
use crate::sieve::{SumLedger, LEDGER_BITS};

/// R₂* only has a proven upper bound from here on.
pub const R2_STAR_UPPER_FROM: u64 = 227;

/// One checkpoint of the `(log x)^{-3/2}` inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundGridRow {
    pub x: u64,
    /// The deviation that the bound must control (see the producing function).
    pub lhs: Real,
    pub bound: Real,
    pub margin: Real,
    pub pass: bool,
}

impl BoundGridRow {
    fn new(x: u64, lhs: Real, bound: Real) -> Self {
        let margin = Float::with_val(LEDGER_BITS, &bound - &lhs);
        let pass = lhs < bound;
        BoundGridRow {
            x,
            lhs,
            bound,
            margin,
            pass,
        }
    }

    pub fn to_check_row(&self, label: &str) -> CheckRow {
        CheckRow::below(Some(self.x), label, self.lhs.clone(), self.bound.clone())
    }
}

fn xf(x: u64) -> Real {
    Float::with_val(LEDGER_BITS, x)
}

fn bound_3_2(l: &Real) -> Real {
    Float::with_val(LEDGER_BITS, l.pow(-1.5f64))
}

/// `|𝓡₂(x) − ½(log log x + β)² − (P(2) − ζ(2))/2 − α₁/log x|` against
/// `(log x)^{-3/2}` at every checkpoint `x ≥ 2`.
pub fn explicit_r2_check(ledger: &SumLedger, tbl: &ConstantsTable, at: &AlphaTable) -> Result<Vec<BoundGridRow>> {
    let mut rows = Vec::new();
    for rec in ledger.records.iter().filter(|r| r.x >= 2) {
        let x = xf(rec.x);
        let (l, _) = logs(&x)?;
        let main = r2_expansion(&x, 1, tbl, at, R2Variant::All)?;
        let lhs = Float::with_val(LEDGER_BITS, &rec.r[2] - &main).abs();
        rows.push(BoundGridRow::new(rec.x, lhs, bound_3_2(&l)));
    }
    Ok(rows)
}

/// Same inequality for `𝓡₂*` with its constant `−(P(2) + ζ(2))/2`.
/// The lower side `𝓡₂* − main > −(log x)^{-3/2}` is required at every
/// checkpoint, the upper side only from `x = 227`; `lhs` is `main − 𝓡₂*`
/// below 227 and `|𝓡₂* − main|` from there on.
pub fn explicit_r2_star_check(
    ledger: &SumLedger,
    tbl: &ConstantsTable,
    at: &AlphaTable,
) -> Result<Vec<BoundGridRow>> {
    let mut rows = Vec::new();
    for rec in ledger.records.iter().filter(|r| r.x >= 2) {
        let x = xf(rec.x);
        let (l, _) = logs(&x)?;
        let main = r2_expansion(&x, 1, tbl, at, R2Variant::Squarefree)?;
        let d = Float::with_val(LEDGER_BITS, &rec.r2_star - &main);
        let lhs = if rec.x < R2_STAR_UPPER_FROM { -d } else { d.abs() };
        rows.push(BoundGridRow::new(rec.x, lhs, bound_3_2(&l)));
    }
    Ok(rows)
}

/// `exp(exp(√(113/90) − β))`, where `½(log log x + β)² = 𝓡₂(10) = 113/180`.
pub fn x0_two(beta: &Real) -> Real {
    let b = LEDGER_BITS.max(beta.prec());
    let r = Float::with_val(b, 113) / 90u32;
    (r.sqrt() - beta).exp().exp()
}

/// `½(log log x)² < 𝓡₂(x)` on `[4, limit]` and `𝓡₂(x) < ½(log log x + β)²`
/// on `[11, limit]`, the upper bound failing at `x = 10`, and the crossover
/// point `x₀(2)`.
pub fn r2_window_check(ledger: &SumLedger, tbl: &ConstantsTable) -> Result<CheckReport> {
    let beta = Float::with_val(LEDGER_BITS, &tbl.beta.value);
    let mut rep = CheckReport::new("cor17_windows");
    for rec in &ledger.records {
        if rec.x < 4 {
            continue;
        }
        let (_, ll) = logs(&xf(rec.x))?;
        let lower = Float::with_val(LEDGER_BITS, ll.square_ref()) / 2u32;
        let upper = Float::with_val(LEDGER_BITS, &ll + &beta).square() / 2u32;
        let r2 = rec.r[2].clone();
        rep.push(CheckRow::above(Some(rec.x), "lower: R2 > (loglog x)^2/2", r2.clone(), lower));
        if rec.x >= 11 {
            rep.push(CheckRow::below(Some(rec.x), "upper: R2 < (loglog x + beta)^2/2", r2, upper));
        } else if rec.x == 10 {
            rep.push(CheckRow::above(
                Some(10),
                "upper bound fails: R2(10) > (loglog 10 + beta)^2/2",
                r2,
                upper,
            ));
        }
    }
    rep.require("checkpoint x = 4 present", ledger.at(4).is_some());
    rep.require("checkpoint x = 10 present", ledger.at(10).is_some());
    rep.require("checkpoint x = 11 present", ledger.at(11).is_some());
    let x0 = x0_two(&beta);
    rep.require("x0(2) lies in (10, 11)", x0 > 10 && x0 < 11);
    let dev = Float::with_val(LEDGER_BITS, &x0 - Float::with_val(LEDGER_BITS, 10.5998)).abs();
    rep.push(CheckRow::at_most(None, "|x0(2) - 10.5998|", dev, Float::with_val(64, 5e-4)));
    rep.note(format!("x0(2) = {}", x0.to_string_radix(10, Some(12))));
    Ok(rep)
}

/// Bounds on `E(x)` at every checkpoint inside each bound's range. Only
/// grid points are examined; a violation strictly between them would go
/// unnoticed.
pub fn rs_dusart_check(ledger: &SumLedger, beta: &Real) -> Result<CheckReport> {
    let mut rep = CheckReport::new("rs_dusart");
    for rec in ledger.records.iter().filter(|r| r.x >= 2) {
        let (l, _) = logs(&xf(rec.x))?;
        let l2 = Float::with_val(LEDGER_BITS, l.square_ref());
        let l3 = Float::with_val(LEDGER_BITS, (&l).pow(3u32));
        let e = rec.mertens_error(beta);
        let x = Some(rec.x);
        rep.push(CheckRow::above(x, "E > -1/(2 log^2 x)", e.clone(), -(Float::with_val(LEDGER_BITS, 2u32 * &l2).recip())));
        rep.push(CheckRow::below(x, "E < 1/log^2 x", e.clone(), Float::with_val(LEDGER_BITS, l2.recip_ref())));
        if rec.x <= POSITIVE_E_UPTO {
            rep.push(CheckRow::above(x, "E > 0", e.clone(), Float::with_val(64, 0)));
        }
        if rec.x >= DUSART_D1_FROM {
            let b = Float::with_val(LEDGER_BITS, 10u32 * &l2).recip() + Float::with_val(LEDGER_BITS, 4u32) / (15u32 * l3.clone());
            rep.push(CheckRow::at_most(x, "|E| <= 1/(10 log^2 x) + 4/(15 log^3 x)", e.clone().abs(), b));
        }
        if rec.x >= DUSART_D2_FROM {
            let b = Float::with_val(LEDGER_BITS, 0.2f64) / &l3;
            rep.push(CheckRow::at_most(x, "|E| <= 0.2/log^3 x", e.abs(), b));
        }
    }
    rep.note("checked at sieve checkpoints only");
    Ok(rep)
}

/// Recomputes `(α_{j+1}/α_j)/(2j²/(j+1))` from the tabulated `α_j`.
///
/// In the shipped table the printed ratio on row `j + 1` is the one formed
/// from `α_j` and `α_{j+1}`; the first printed ratio needs the `α` just below
/// the table and only enters the monotonicity condition.
pub fn ratio_table_check(table: &ReferenceAlphaTable) -> CheckReport {
    let b = LEDGER_BITS;
    let mut rep = CheckReport::new("conj_ratio");
    let mut recomputed = Vec::new();
    for w in table.rows.windows(2) {
        let (lo_row, hi_row) = (&w[0], &w[1]);
        let j = lo_row.j;
        let scale = Float::with_val(b, 2 * j as u64 * j as u64) / (j + 1);
        let mid = Float::with_val(b, &hi_row.alpha / &lo_row.alpha) / &scale;
        let hi = Float::with_val(b, &hi_row.alpha + &hi_row.alpha_half_ulp)
            / Float::with_val(b, &lo_row.alpha - &lo_row.alpha_half_ulp)
            / &scale;
        let lo = Float::with_val(b, &hi_row.alpha - &hi_row.alpha_half_ulp)
            / Float::with_val(b, &lo_row.alpha + &lo_row.alpha_half_ulp)
            / &scale;
        let spread = Float::with_val(b, &hi - &mid).max(&Float::with_val(b, &mid - &lo));
        if let Some((printed, half)) = &hi_row.printed_ratio {
            let dev = Float::with_val(b, &mid - printed).abs();
            rep.push(CheckRow::at_most(
                Some(hi_row.j as u64),
                format!("ratio from alpha_{j}, alpha_{} vs printed row {}", j + 1, hi_row.j),
                dev,
                spread + half,
            ));
        }
        recomputed.push(mid);
    }
    let increasing = |v: &[Real]| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|r| *r < 1);
    let printed: Vec<Real> = table
        .rows
        .iter()
        .filter_map(|r| r.printed_ratio.as_ref().map(|p| p.0.clone()))
        .collect();
    rep.require("recomputed ratios increase and stay below 1", increasing(&recomputed));
    if !printed.is_empty() {
        rep.require("printed ratios increase and stay below 1", increasing(&printed));
    }
    // Asymptotic α_j ~ (j−1)! 2^{j−1}/j, shown for reference only.
    let mut ann = Vec::new();
    for r in &table.rows {
        let fact = Float::with_val(b, Float::factorial(r.j - 1));
        let pred = fact * Float::with_val(b, 2).pow(r.j - 1) / r.j;
        ann.push(format!("{}:{:.3}", r.j, Float::with_val(b, &r.alpha / pred).to_f64()));
    }
    rep.note(format!("alpha_j / ((j-1)! 2^(j-1)/j): {}", ann.join(" ")));
    rep.note(format!("table provenance: {}", table.provenance));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiprime::parse_alpha_table;

    #[test]
    fn x0_matches_known_crossover() {
        let beta = Float::with_val(LEDGER_BITS, 0.26149721284764278);
        let x0 = x0_two(&beta).to_f64();
        assert!((x0 - 10.5998).abs() < 5e-4, "{x0}");
    }

    #[test]
    fn ratio_check_flags_a_tampered_row() {
        let good = "# provenance: t\nj,alpha_j,printed_ratio\n11,3.4791e8,0.98998\n12,6.9638e9,0.99253\n13,1.5342e11,0.99443\n";
        let rep = ratio_table_check(&parse_alpha_table(good).unwrap());
        assert!(rep.pass(), "{rep:?}");
        let bad = good.replace("0.99443", "0.99400");
        let rep = ratio_table_check(&parse_alpha_table(&bad).unwrap());
        assert!(!rep.pass());
    }
}
