//! Orchestration: configuration, sieve-or-cache, the twenty checks, and the
//! manifest that records them.

pub mod checks;
pub mod config;
pub mod reference;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rug::Float;
use serde::Serialize;

pub use checks::Inputs;
pub use config::{CheckpointPolicy, ConfigLayer, RunConfig};

use crate::constants::{ConstantsTable, Engine};
use crate::error::{Error, Result};
use crate::poly::{build_sk_qihu, build_sk_tenenbaum, build_vk, build_wk, PolyDump};
use crate::precision::to_decimal;
use crate::report::{CheckReport, ReportJson, CSV_HEADER};
use crate::semiprime::{parse_alpha_table, AlphaTable, ReferenceAlphaTable};
use crate::sieve::{accumulate, cache, SumLedger, LEDGER_BITS};

type Builder = fn(&Inputs) -> Result<CheckReport>;

/// Manifest order.
pub const CHECKS: [(&str, Builder); 20] = [
    ("nu_table", checks::nu_table),
    ("nu_star_table", checks::nu_star_table),
    ("beta_p_value", checks::beta_p_value),
    ("decay_2k", checks::decay_2k),
    ("lemma72", checks::lemma72),
    ("identity_A", checks::identity_a),
    ("identity_B", checks::identity_b),
    ("identity_C", checks::identity_c),
    ("thm11_error_law", checks::thm11_error_law),
    ("cor13_bounds", checks::cor13_bounds),
    ("thm15_decay", checks::thm15_decay),
    ("thm16_explicit", checks::thm16_explicit),
    ("cor17_windows", checks::cor17_windows),
    ("cor18_windows", checks::cor18_windows),
    ("thm19_error_law", checks::thm19_error_law),
    ("conj_ratio", checks::conj_ratio),
    ("rs_dusart", checks::rs_dusart),
    ("alpha1_dual_route", checks::alpha1_dual_route),
    ("gamma_alpha_relation", checks::gamma_alpha_relation),
    ("harmonic_partition", checks::harmonic_partition),
];

/// `α_j` are derived for `j ≤ ALPHA_J_MAX`; the expansions use `N ≤ 2`.
pub const ALPHA_J_MAX: u32 = 2;

pub const MANIFEST_CSV: &str = "manifest.csv";
pub const MANIFEST_JSON: &str = "manifest.json";
pub const CONSTANTS_JSON: &str = "constants.json";
pub const LEDGER_CSV: &str = "ledger.csv";
pub const POLYNOMIALS_JSON: &str = "polynomials.json";
pub const ALPHA_JSON: &str = "alpha.json";

#[derive(Debug, Clone)]
pub struct Manifest {
    pub config_hash: String,
    /// [`RunConfig::canonical`] of the run.
    pub config: String,
    pub reports: Vec<CheckReport>,
}

#[derive(Serialize)]
struct ManifestJson<'a> {
    config_hash: &'a str,
    config: &'a str,
    pass: bool,
    checks: Vec<ReportJson>,
}

impl Manifest {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(CheckReport::pass)
    }

    pub fn get(&self, id: &str) -> Option<&CheckReport> {
        self.reports.iter().find(|r| r.check_id == id)
    }

    /// `# config_hash: …` then the report CSV.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# config_hash: {}\n{CSV_HEADER}\n", self.config_hash);
        for r in &self.reports {
            r.write_csv_rows(&mut s);
        }
        s
    }

    pub fn to_json(&self) -> String {
        let doc = ManifestJson {
            config_hash: &self.config_hash,
            config: &self.config,
            pass: self.pass(),
            checks: self.reports.iter().map(CheckReport::to_json).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data always serializes") + "\n"
    }

    /// One line per check, for a terminal.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<22} {:<5} {:>6}  tightest margin", "check", "pass", "rows");
        for r in &self.reports {
            let tight = r
                .tightest()
                .map(|row| to_decimal(&row.margin(), 4))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "{:<22} {:<5} {:>6}  {}",
                r.check_id,
                if r.pass() { "PASS" } else { "FAIL" },
                r.rows.len(),
                tight
            );
            for row in r.failed_rows().take(3) {
                let x = row.x.map(|x| x.to_string()).unwrap_or_default();
                let _ = writeln!(s, "    failed at {x}: {}", row.label);
            }
            for (what, holds) in &r.conditions {
                if !holds {
                    let _ = writeln!(s, "    failed: {what}");
                }
            }
        }
        let _ = writeln!(s, "overall: {}", if self.pass() { "PASS" } else { "FAIL" });
        s
    }

    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        let csv = write_file(dir, MANIFEST_CSV, &self.to_csv())?;
        let json = write_file(dir, MANIFEST_JSON, &self.to_json())?;
        Ok((csv, json))
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Runs every check. A check that cannot run becomes a failing report, so
/// each id still appears exactly once.
pub fn run_checks(inp: &Inputs, config_hash: &str, config: &str) -> Manifest {
    let reports = CHECKS
        .iter()
        .map(|(id, build)| match build(inp) {
            Ok(mut r) => {
                debug_assert_eq!(r.check_id, *id);
                r.check_id = id.to_string();
                r
            }
            Err(e) => {
                let mut r = CheckReport::new(*id);
                r.require(format!("check could not run: {e}"), false);
                r
            }
        })
        .collect();
    Manifest {
        config_hash: config_hash.to_string(),
        config: config.to_string(),
        reports,
    }
}

/// Loads the ledger for `config` from its cache, or sieves and caches it.
/// Returns whether the cache was used.
pub fn load_or_sieve(config: &RunConfig, beta: &Float) -> Result<(SumLedger, bool)> {
    let sc = config.sieve_config()?;
    let key = sc.ledger_key();
    if let Some(l) = cache::load(&config.cache_dir, &key)? {
        return Ok((l, true));
    }
    let (ledger, _) = accumulate(&sc, &Float::with_val(LEDGER_BITS, beta))?;
    cache::save(&config.cache_dir, &ledger, &key)?;
    Ok((ledger, false))
}

pub fn ledger_csv(ledger: &SumLedger, beta: &Float, config_hash: &str) -> String {
    format!("# config_hash: {config_hash}\n{}", cache::csv_string(ledger, beta))
}

pub fn reference_alpha_table() -> Result<ReferenceAlphaTable> {
    parse_alpha_table(reference::ALPHA_TABLE)
}

/// All inputs of a verification run.
pub struct Session {
    pub config: RunConfig,
    pub config_hash: String,
    pub tbl: ConstantsTable,
    pub engine: Engine,
    pub ledger: SumLedger,
    pub ledger_from_cache: bool,
    pub alpha: AlphaTable,
    pub reference: ReferenceAlphaTable,
}

impl Session {
    pub fn open(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let prec = config.precision()?;
        let config_hash = config.hash()?;
        let tbl = ConstantsTable::compute(prec)?;
        let engine = Engine::new(prec)?;
        let (ledger, ledger_from_cache) = load_or_sieve(&config, &tbl.beta.value)?;
        let alpha = AlphaTable::build(&tbl, &ledger, ledger.last().x, ALPHA_J_MAX)?;
        let reference = reference_alpha_table()?;
        Ok(Session {
            config,
            config_hash,
            tbl,
            engine,
            ledger,
            ledger_from_cache,
            alpha,
            reference,
        })
    }

    pub fn inputs(&self) -> Inputs<'_> {
        Inputs {
            tbl: &self.tbl,
            engine: &self.engine,
            ledger: &self.ledger,
            alpha: &self.alpha,
            reference: &self.reference,
        }
    }

    pub fn verify(&self) -> Result<Manifest> {
        Ok(run_checks(&self.inputs(), &self.config_hash, &self.config.canonical()?))
    }
}

#[derive(Serialize)]
struct PolyExport {
    config_hash: String,
    tenenbaum_s: Vec<PolyDump>,
    qihu_s: Vec<PolyDump>,
    v: Vec<PolyDump>,
    w: Vec<PolyDump>,
}

/// Degree bound of the exported polynomial families.
pub const POLY_EXPORT_MAX_K: u32 = 10;

pub fn polynomials_json(tbl: &ConstantsTable, config_hash: &str) -> Result<String> {
    let digits = tbl.precision.digits() as usize;
    let dump = |f: fn(u32, &ConstantsTable) -> Result<crate::poly::DensePoly>| -> Result<Vec<PolyDump>> {
        (0..=POLY_EXPORT_MAX_K).map(|k| Ok(f(k, tbl)?.dump(digits))).collect()
    };
    let doc = PolyExport {
        config_hash: config_hash.to_string(),
        tenenbaum_s: dump(build_sk_tenenbaum)?,
        qihu_s: dump(build_sk_qihu)?,
        v: dump(build_vk)?,
        w: dump(build_wk)?,
    };
    Ok(serde_json::to_string_pretty(&doc).expect("plain data always serializes") + "\n")
}

#[derive(Serialize)]
struct AlphaRowJson {
    j: u32,
    gamma: String,
    gamma_err: String,
    alpha: String,
    alpha_err: String,
    source: crate::semiprime::AlphaSource,
    tail: crate::semiprime::TailStatus,
}

#[derive(Serialize)]
struct AlphaExport {
    config_hash: String,
    cutoff: u64,
    rows: Vec<AlphaRowJson>,
}

pub fn alpha_json(at: &AlphaTable, config_hash: &str) -> String {
    let rows = at
        .alpha
        .iter()
        .filter_map(|(j, a)| {
            let g = at.gamma.get(j)?;
            Some(AlphaRowJson {
                j: *j,
                gamma: to_decimal(&g.value, 20),
                gamma_err: to_decimal(&g.err, 3),
                alpha: to_decimal(&a.value, 20),
                alpha_err: to_decimal(&a.err, 3),
                source: a.source,
                tail: a.tail,
            })
        })
        .collect();
    let doc = AlphaExport {
        config_hash: config_hash.to_string(),
        cutoff: at.cutoff,
        rows,
    };
    serde_json::to_string_pretty(&doc).expect("plain data always serializes") + "\n"
}
