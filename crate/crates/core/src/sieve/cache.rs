//! Persistent ledger cache and CSV export.
//!
//! File layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "KAPLEDG\0"
//! version  u32
//! key      32 bytes (SieveConfig::ledger_key, raw)
//! length   u64      payload byte count
//! payload  JSON, every real as a round-trip decimal string
//! digest   32 bytes SHA-256 of everything above
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ledger::{CheckpointRecord, SumLedger, LEDGER_BITS};
use super::{MAX_K_MAX, MAX_LIMIT};
use crate::error::{Error, Result};
use crate::precision::{parse_decimal, to_decimal, Real};

pub const MAGIC: &[u8; 8] = b"KAPLEDG\0";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 32 + 8;
const DIGEST_LEN: usize = 32;

/// Digits written to CSV; the ledger itself holds about 57.
pub const CSV_DIGITS: usize = 40;

#[derive(Serialize, Deserialize)]
struct WireLedger {
    limit: u64,
    k_max: u32,
    logp_moments: u32,
    segment_size: u64,
    records: Vec<WireRecord>,
}

#[derive(Serialize, Deserialize)]
struct WireRecord {
    x: u64,
    counts: Vec<u64>,
    overflow_count: u64,
    r: Vec<String>,
    s: Vec<String>,
    overflow_recip: String,
    r2_star: String,
    t: String,
    logp_moments: Vec<String>,
}

/// Exact decimal form: MPFR picks enough digits to read back the same float.
fn enc(x: &Real) -> String {
    x.to_string_radix(10, None)
}

fn dec(s: &str) -> Result<Real> {
    parse_decimal(LEDGER_BITS, s)
}

fn dec_all(v: &[String]) -> Result<Vec<Real>> {
    v.iter().map(|s| dec(s)).collect()
}

pub fn cache_file_name(key: &str) -> String {
    format!("ledger-{}.bin", &key[..key.len().min(16)])
}

pub fn encode(ledger: &SumLedger, key: &str) -> Result<Vec<u8>> {
    let key_bytes = key_bytes(key)?;
    let wire = WireLedger {
        limit: ledger.limit,
        k_max: ledger.k_max,
        logp_moments: ledger.logp_moments,
        segment_size: ledger.segment_size,
        records: ledger
            .records
            .iter()
            .map(|r| WireRecord {
                x: r.x,
                counts: r.counts.clone(),
                overflow_count: r.overflow_count,
                r: r.r.iter().map(enc).collect(),
                s: r.s.iter().map(enc).collect(),
                overflow_recip: enc(&r.overflow_recip),
                r2_star: enc(&r.r2_star),
                t: enc(&r.t),
                logp_moments: r.logp_moments.iter().map(enc).collect(),
            })
            .collect(),
    };
    let payload = serde_json::to_vec(&wire).expect("ledger wire form always serializes");
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len() + DIGEST_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&key_bytes);
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&payload);
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    Ok(out)
}

fn key_bytes(key: &str) -> Result<[u8; 32]> {
    let raw = hex::decode(key).map_err(|e| Error::Config(format!("ledger key is not hex: {e}")))?;
    raw.try_into()
        .map_err(|_| Error::Config("ledger key must be 32 bytes".into()))
}

fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
    Error::Cache {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Decodes and fully validates a cache image. `path` only labels errors.
/// When `expected_key` is given, a ledger built for another configuration
/// is rejected.
pub fn decode(bytes: &[u8], path: &Path, expected_key: Option<&str>) -> Result<SumLedger> {
    if bytes.len() < HEADER_LEN + DIGEST_LEN {
        return Err(corrupt(path, "file is truncated"));
    }
    if &bytes[..8] != MAGIC {
        return Err(corrupt(path, "not a ledger cache (bad magic)"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != VERSION {
        return Err(corrupt(path, format!("unsupported cache version {version}")));
    }
    let len = u64::from_le_bytes(bytes[44..52].try_into().unwrap());
    let body_end = HEADER_LEN as u64 + len;
    if body_end + DIGEST_LEN as u64 != bytes.len() as u64 {
        return Err(corrupt(path, "payload length does not match file size"));
    }
    let body_end = body_end as usize;
    let digest = Sha256::digest(&bytes[..body_end]);
    if digest.as_slice() != &bytes[body_end..] {
        return Err(corrupt(path, "checksum mismatch"));
    }
    if let Some(k) = expected_key {
        if bytes[12..44] != key_bytes(k)? {
            return Err(corrupt(path, "cache was built for a different sieve configuration"));
        }
    }
    let wire: WireLedger = serde_json::from_slice(&bytes[HEADER_LEN..body_end])
        .map_err(|e| corrupt(path, format!("payload: {e}")))?;
    from_wire(wire).map_err(|e| corrupt(path, e.to_string()))
}

fn from_wire(w: WireLedger) -> Result<SumLedger> {
    if w.limit < 2 || w.limit > MAX_LIMIT || w.k_max < 2 || w.k_max > MAX_K_MAX || w.logp_moments > 16 {
        return Err(Error::Parse("ledger parameters out of range".into()));
    }
    if w.records.is_empty() {
        return Err(Error::Parse("ledger holds no checkpoints".into()));
    }
    let width = w.k_max as usize + 1;
    let mut records = Vec::with_capacity(w.records.len());
    let mut prev = 1u64;
    for r in w.records {
        if r.x <= prev || r.x > w.limit {
            return Err(Error::Parse(format!("checkpoint {} out of order or range", r.x)));
        }
        prev = r.x;
        if r.counts.len() != width
            || r.r.len() != width
            || r.s.len() != width
            || r.logp_moments.len() != w.logp_moments as usize
        {
            return Err(Error::Parse(format!("record at x = {} has the wrong shape", r.x)));
        }
        let total = r
            .counts
            .iter()
            .try_fold(r.overflow_count, |a, &b| a.checked_add(b));
        if total != Some(r.x) {
            return Err(Error::Parse(format!("counts at x = {} do not sum to x", r.x)));
        }
        records.push(CheckpointRecord {
            x: r.x,
            counts: r.counts,
            overflow_count: r.overflow_count,
            r: dec_all(&r.r)?,
            s: dec_all(&r.s)?,
            overflow_recip: dec(&r.overflow_recip)?,
            r2_star: dec(&r.r2_star)?,
            t: dec(&r.t)?,
            logp_moments: dec_all(&r.logp_moments)?,
        });
    }
    Ok(SumLedger {
        limit: w.limit,
        k_max: w.k_max,
        logp_moments: w.logp_moments,
        segment_size: w.segment_size,
        records,
    })
}

/// Writes atomically (temp file, then rename) so an interrupted run never
/// leaves a half-written cache.
pub fn save(dir: &Path, ledger: &SumLedger, key: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(cache_file_name(key));
    let tmp = path.with_extension("tmp");
    let bytes = encode(ledger, key)?;
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// `Ok(None)` when no cache exists for `key`.
pub fn load(dir: &Path, key: &str) -> Result<Option<SumLedger>> {
    let path = dir.join(cache_file_name(key));
    match std::fs::read(&path) {
        Ok(bytes) => decode(&bytes, &path, Some(key)).map(Some),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::io(path, e)),
    }
}

/// `x,k,N_k,R_k,S_k,R2_star,T,E`, one row per checkpoint and `k ≤ k_max`.
pub fn write_csv<W: Write>(ledger: &SumLedger, beta: &Real, mut w: W) -> std::io::Result<()> {
    writeln!(w, "x,k,N_k,R_k,S_k,R2_star,T,E")?;
    for r in &ledger.records {
        let e = to_decimal(&r.mertens_error(beta), CSV_DIGITS);
        let r2s = to_decimal(&r.r2_star, CSV_DIGITS);
        let t = to_decimal(&r.t, CSV_DIGITS);
        for k in 0..r.counts.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.x,
                k,
                r.counts[k],
                to_decimal(&r.r[k], CSV_DIGITS),
                to_decimal(&r.s[k], CSV_DIGITS),
                r2s,
                t,
                e
            )?;
        }
    }
    Ok(())
}

pub fn csv_string(ledger: &SumLedger, beta: &Real) -> String {
    let mut buf = Vec::new();
    write_csv(ledger, beta, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{accumulate, SieveConfig};

    fn sample() -> (SumLedger, String, Real) {
        let mut cfg = SieveConfig::new(70_000, vec![4, 10, 11, 1000, 65_537, 70_000]);
        cfg.segment_size = 1 << 16;
        let beta = rug::Float::with_val(LEDGER_BITS, 0.2614972128476428);
        let (ledger, _) = accumulate(&cfg, &beta).unwrap();
        (ledger, cfg.ledger_key(), beta)
    }

    #[test]
    fn round_trip_is_exact() {
        let (ledger, key, _) = sample();
        let bytes = encode(&ledger, &key).unwrap();
        let back = decode(&bytes, Path::new("mem"), Some(&key)).unwrap();
        assert_eq!(back, ledger);
    }

    #[test]
    fn every_single_byte_flip_is_detected() {
        let (ledger, key, _) = sample();
        let bytes = encode(&ledger, &key).unwrap();
        for i in (0..bytes.len()).step_by(97) {
            let mut b = bytes.clone();
            b[i] ^= 0x20;
            assert!(matches!(decode(&b, Path::new("mem"), None), Err(Error::Cache { .. })), "byte {i}");
        }
    }

    #[test]
    fn foreign_key_rejected() {
        let (ledger, key, _) = sample();
        let bytes = encode(&ledger, &key).unwrap();
        let other = "00".repeat(32);
        let err = decode(&bytes, Path::new("mem"), Some(&other)).unwrap_err();
        assert!(err.to_string().contains("different sieve configuration"));
    }

    #[test]
    fn save_and_load() {
        let (ledger, key, _) = sample();
        let dir = tempfile::tempdir().unwrap();
        assert!(load(dir.path(), &key).unwrap().is_none());
        save(dir.path(), &ledger, &key).unwrap();
        assert_eq!(load(dir.path(), &key).unwrap().unwrap(), ledger);
    }

    #[test]
    fn csv_shape() {
        let (ledger, _, beta) = sample();
        let csv = csv_string(&ledger, &beta);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,k,N_k,R_k,S_k,R2_star,T,E");
        assert_eq!(lines.len(), 1 + ledger.records.len() * (ledger.k_max as usize + 1));
        // x = 10, k = 2: four semiprimes
        let row = lines.iter().find(|l| l.starts_with("10,2,")).unwrap();
        assert!(row.starts_with("10,2,4,6.27777"));
    }
}
