//! `kmertens`: constants, sieve ledgers and the verification manifest.
//!
//! Exit status: 0 when everything requested succeeded (for `verify`, every
//! check passed), 1 when a check failed, 2 on a configuration or I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use kmertens::constants::ConstantsTable;
use kmertens::verify::{
    alpha_json, ledger_csv, load_or_sieve, polynomials_json, write_file, ConfigLayer, RunConfig, Session,
    ALPHA_JSON, CONSTANTS_JSON, LEDGER_CSV, POLYNOMIALS_JSON,
};

#[derive(Parser)]
#[command(name = "kmertens", version, about = "Higher Mertens constants and exact k-almost-prime reciprocal sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the constants table as JSON.
    Constants(Flags),
    /// Sieve (or load from cache) and write the checkpoint ledger as CSV.
    Sieve(Flags),
    /// Run every check; print a summary and write the manifest.
    Verify(Flags),
    /// Write constants, ledger, polynomial and alpha artifacts.
    Export(Flags),
}

#[derive(Args)]
struct Flags {
    /// Key-value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    limit: Option<u64>,
    /// Decimal digits of working precision.
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    segment_size: Option<u64>,
    /// `log:<points per decade>` or a comma-separated list.
    #[arg(long)]
    checkpoints: Option<String>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Some(ConfigLayer::parse(&text).with_context(|| p.display().to_string())?)
            }
            None => None,
        };
        let flags = ConfigLayer {
            precision_digits: self.digits,
            sieve_limit: self.limit,
            segment_size: self.segment_size,
            threads: self.threads,
            checkpoints: self.checkpoints.clone(),
            cache_dir: self.cache_dir.clone(),
            output_dir: self.out.clone(),
        };
        Ok(RunConfig::resolve(file.as_ref(), &flags)?)
    }
}

fn constants(c: &RunConfig) -> Result<ExitCode> {
    let tbl = ConstantsTable::compute(c.precision()?)?;
    let path = write_file(&c.output_dir, CONSTANTS_JSON, &tbl.to_json(&c.hash()?)?)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn sieve(c: &RunConfig) -> Result<ExitCode> {
    let hash = c.hash()?;
    let tbl = ConstantsTable::compute(c.precision()?)?;
    let (ledger, cached) = load_or_sieve(c, &tbl.beta.value)?;
    let path = write_file(&c.output_dir, LEDGER_CSV, &ledger_csv(&ledger, &tbl.beta.value, &hash))?;
    println!(
        "{} ledger to {} with {} checkpoints",
        if cached { "loaded cached" } else { "sieved" },
        ledger.limit,
        ledger.records.len()
    );
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(c: RunConfig) -> Result<ExitCode> {
    let out = c.output_dir.clone();
    let s = Session::open(c)?;
    let m = s.verify()?;
    let (csv, json) = m.write(&out)?;
    print!("{}", m.summary());
    println!("config hash {}", m.config_hash);
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(if m.pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn export(c: RunConfig) -> Result<ExitCode> {
    let out = c.output_dir.clone();
    let s = Session::open(c)?;
    let h = &s.config_hash;
    let beta = &s.tbl.beta.value;
    for (name, body) in [
        (CONSTANTS_JSON, s.tbl.to_json(h)?),
        (LEDGER_CSV, ledger_csv(&s.ledger, beta, h)),
        (POLYNOMIALS_JSON, polynomials_json(&s.tbl, h)?),
        (ALPHA_JSON, alpha_json(&s.alpha, h)),
    ] {
        println!("wrote {}", write_file(&out, name, &body)?.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Constants(f) => constants(&f.resolve()?),
        Command::Sieve(f) => sieve(&f.resolve()?),
        Command::Verify(f) => verify(f.resolve()?),
        Command::Export(f) => export(f.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
