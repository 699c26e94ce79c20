//! Reader for the shipped `α_j` reference table.
//!
//! ```text
//! # provenance: <free text>
//! j,alpha_j,printed_ratio
//! 11,3.4791e8,0.98998
//! ```
//!
//! The ratio column is optional. Each value keeps the half-unit of its last
//! printed digit, so comparisons can account for rounding in the source.

use crate::error::{Error, Result};
use crate::precision::{parse_decimal, printed_half_ulp, Real};

const BITS: u32 = 128;
const MAX_ROWS: usize = 1000;
/// Ratio checks form `(j - 1)!`; larger indices only cost time.
const MAX_INDEX: u32 = 1000;
const MAX_LINE: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceAlphaRow {
    pub j: u32,
    pub alpha: Real,
    /// Half a unit in the last printed digit of `alpha`.
    pub alpha_half_ulp: Real,
    pub printed_ratio: Option<(Real, Real)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceAlphaTable {
    pub provenance: String,
    pub rows: Vec<ReferenceAlphaRow>,
}

impl ReferenceAlphaTable {
    pub fn get(&self, j: u32) -> Option<&ReferenceAlphaRow> {
        self.rows.iter().find(|r| r.j == j)
    }
}

fn value(field: &str, line_no: usize) -> Result<(Real, Real)> {
    let v = parse_decimal(BITS, field).map_err(|e| Error::Parse(format!("line {line_no}: {e}")))?;
    if v <= 0 {
        return Err(Error::Parse(format!("line {line_no}: values must be positive")));
    }
    Ok((v, printed_half_ulp(BITS, field)?))
}

pub fn parse_alpha_table(text: &str) -> Result<ReferenceAlphaTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let provenance = match lines.next() {
        Some((_, l)) if l.starts_with("# provenance:") => l["# provenance:".len()..].trim().to_string(),
        _ => return Err(Error::Parse("table must open with a '# provenance:' line".into())),
    };
    let mut lines = lines.filter(|(_, l)| !l.starts_with('#'));
    let with_ratio = match lines.next() {
        Some((_, "j,alpha_j")) => false,
        Some((_, "j,alpha_j,printed_ratio")) => true,
        _ => return Err(Error::Parse("missing 'j,alpha_j[,printed_ratio]' header".into())),
    };
    let mut rows: Vec<ReferenceAlphaRow> = Vec::new();
    for (no, line) in lines {
        if line.len() > MAX_LINE {
            return Err(Error::Parse(format!("line {no} is too long")));
        }
        if rows.len() == MAX_ROWS {
            return Err(Error::Parse(format!("more than {MAX_ROWS} rows")));
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != if with_ratio { 3 } else { 2 } {
            return Err(Error::Parse(format!("line {no}: wrong number of fields")));
        }
        let j: u32 = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("line {no}: bad index {:?}", fields[0])))?;
        if j == 0 || j > MAX_INDEX {
            return Err(Error::Parse(format!("line {no}: index must lie in [1, {MAX_INDEX}]")));
        }
        if let Some(prev) = rows.last() {
            if Some(j) != prev.j.checked_add(1) {
                return Err(Error::Parse(format!("line {no}: indices must be consecutive")));
            }
        }
        let (alpha, alpha_half_ulp) = value(fields[1], no)?;
        let printed_ratio = if with_ratio { Some(value(fields[2], no)?) } else { None };
        rows.push(ReferenceAlphaRow {
            j,
            alpha,
            alpha_half_ulp,
            printed_ratio,
        });
    }
    if rows.is_empty() {
        return Err(Error::Parse("table has no rows".into()));
    }
    Ok(ReferenceAlphaTable { provenance, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# provenance: test\nj,alpha_j,printed_ratio\n11,3.4791e8,0.98998\n12,6.9638e9,0.99253\n";

    #[test]
    fn parses_rows_and_rounding_units() {
        let t = parse_alpha_table(SAMPLE).unwrap();
        assert_eq!(t.provenance, "test");
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].alpha, 3.4791e8);
        assert_eq!(t.rows[0].alpha_half_ulp, 5000);
        let (r, h) = t.rows[1].printed_ratio.clone().unwrap();
        assert!((r.to_f64() - 0.99253).abs() < 1e-15);
        assert!((h.to_f64() - 5e-6).abs() < 1e-20);
    }

    #[test]
    fn rejects_malformed_tables() {
        for bad in [
            "",
            "j,alpha_j\n1,2",
            "# provenance: x\n1,2",
            "# provenance: x\nj,alpha_j\n",
            "# provenance: x\nj,alpha_j\n1,2\n3,4",
            "# provenance: x\nj,alpha_j\n1,-2",
            "# provenance: x\nj,alpha_j\n1,2,3",
            "# provenance: x\nj,alpha_j\n0,2",
            "# provenance: x\nj,alpha_j\n1,2e99999999",
            "# provenance: x\nj,alpha_j\n4294967295,2\n0,1",
        ] {
            assert!(matches!(parse_alpha_table(bad), Err(Error::Parse(_))), "{bad:?}");
        }
    }
}
