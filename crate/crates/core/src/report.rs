//! Per-check verification records and their CSV/JSON forms.

use std::fmt::Write as _;

use rug::Float;
use serde::Serialize;

use crate::precision::{to_decimal, Real};

/// Significant digits of reals in reports.
pub const REPORT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// pass ⇔ measured < bound
    Below,
    /// pass ⇔ measured > bound
    Above,
    /// pass ⇔ measured ≤ bound (used for |difference| ≤ tolerance)
    AtMost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    /// Sieve checkpoint or index the row refers to, if any.
    pub x: Option<u64>,
    pub label: String,
    pub measured: Real,
    pub bound: Real,
    pub relation: Relation,
}

impl CheckRow {
    pub fn new(x: Option<u64>, label: impl Into<String>, measured: Real, relation: Relation, bound: Real) -> Self {
        CheckRow {
            x,
            label: label.into(),
            measured,
            bound,
            relation,
        }
    }

    pub fn below(x: Option<u64>, label: impl Into<String>, measured: Real, bound: Real) -> Self {
        Self::new(x, label, measured, Relation::Below, bound)
    }

    pub fn above(x: Option<u64>, label: impl Into<String>, measured: Real, bound: Real) -> Self {
        Self::new(x, label, measured, Relation::Above, bound)
    }

    pub fn at_most(x: Option<u64>, label: impl Into<String>, measured: Real, bound: Real) -> Self {
        Self::new(x, label, measured, Relation::AtMost, bound)
    }

    /// Positive exactly when the row passes (zero counts as passing for `AtMost`).
    pub fn margin(&self) -> Real {
        let p = self.measured.prec().max(self.bound.prec());
        match self.relation {
            Relation::Below | Relation::AtMost => Float::with_val(p, &self.bound - &self.measured),
            Relation::Above => Float::with_val(p, &self.measured - &self.bound),
        }
    }

    pub fn pass(&self) -> bool {
        if self.measured.is_nan() || self.bound.is_nan() {
            return false;
        }
        match self.relation {
            Relation::Below => self.measured < self.bound,
            Relation::Above => self.measured > self.bound,
            Relation::AtMost => self.measured <= self.bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check_id: String,
    pub rows: Vec<CheckRow>,
    /// Conditions that are not row-shaped (e.g. monotonicity of a column).
    pub conditions: Vec<(String, bool)>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check_id: impl Into<String>) -> Self {
        CheckReport {
            check_id: check_id.into(),
            rows: Vec::new(),
            conditions: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn require(&mut self, what: impl Into<String>, holds: bool) {
        self.conditions.push((what.into(), holds));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// A report with nothing to check fails: an empty grid proves nothing.
    pub fn pass(&self) -> bool {
        (!self.rows.is_empty() || !self.conditions.is_empty())
            && self.rows.iter().all(CheckRow::pass)
            && self.conditions.iter().all(|(_, ok)| *ok)
    }

    pub fn failed_rows(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass())
    }

    /// Row with the smallest margin, the one closest to failing.
    pub fn tightest(&self) -> Option<&CheckRow> {
        self.rows.iter().min_by(|a, b| {
            a.margin()
                .partial_cmp(&b.margin())
                .unwrap_or(std::cmp::Ordering::Less)
        })
    }

    /// Rows as `check_id,x,measured,bound,margin,pass`, without a header,
    /// then one line per condition.
    pub fn write_csv_rows(&self, out: &mut String) {
        for r in &self.rows {
            let x = r.x.map(|x| x.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.check_id,
                x,
                to_decimal(&r.measured, REPORT_DIGITS),
                to_decimal(&r.bound, REPORT_DIGITS),
                to_decimal(&r.margin(), REPORT_DIGITS),
                r.pass()
            );
        }
        // Conditions carry no numbers; each still gets a line so that a
        // failure is visible in the CSV alone.
        for (_, holds) in &self.conditions {
            let _ = writeln!(out, "{},,,,,{holds}", self.check_id);
        }
        if self.rows.is_empty() && self.conditions.is_empty() {
            let _ = writeln!(out, "{},,,,,false", self.check_id);
        }
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            check_id: self.check_id.clone(),
            pass: self.pass(),
            rows: self
                .rows
                .iter()
                .map(|r| RowJson {
                    x: r.x,
                    label: r.label.clone(),
                    measured: to_decimal(&r.measured, REPORT_DIGITS),
                    relation: r.relation,
                    bound: to_decimal(&r.bound, REPORT_DIGITS),
                    margin: to_decimal(&r.margin(), REPORT_DIGITS),
                    pass: r.pass(),
                })
                .collect(),
            conditions: self
                .conditions
                .iter()
                .map(|(what, holds)| ConditionJson {
                    what: what.clone(),
                    holds: *holds,
                })
                .collect(),
            notes: self.notes.clone(),
        }
    }
}

pub const CSV_HEADER: &str = "check_id,x,measured,bound,margin,pass";

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub check_id: String,
    pub pass: bool,
    pub rows: Vec<RowJson>,
    pub conditions: Vec<ConditionJson>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowJson {
    pub x: Option<u64>,
    pub label: String,
    pub measured: String,
    pub relation: Relation,
    pub bound: String,
    pub margin: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionJson {
    pub what: String,
    pub holds: bool,
}
