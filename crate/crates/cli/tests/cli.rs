use std::path::Path;
use std::process::{Command, Output};

fn kmertens(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmertens"))
        .args(args)
        .arg("--cache-dir")
        .arg(dir.join("cache"))
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn constants_file_holds_the_tabulated_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = kmertens(dir.path(), &["constants", "--limit", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("out/constants.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["config_hash"].as_str().unwrap().len(), 64);
    let value = |name: &str| -> f64 { doc["constants"][name]["value"].as_str().unwrap().parse().unwrap() };
    assert!((value("nu.2") + 0.562153).abs() < 5e-7);
    assert!((value("beta_p.2") - 0.1893475).abs() < 5e-8);
    assert!((value("alpha1") - 1.332582).abs() < 5e-7);
}

#[test]
fn sieve_reuses_its_cache_and_csv_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sieve", "--limit", "10000", "--checkpoints", "100,10000"];
    let a = kmertens(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("sieved"));
    let first = std::fs::read(dir.path().join("out/ledger.csv")).unwrap();
    let b = kmertens(dir.path(), &args);
    assert!(stdout(&b).starts_with("loaded cached"));
    let second = std::fs::read(dir.path().join("out/ledger.csv")).unwrap();
    assert_eq!(first, second);
    // N_2(10^4) = 2625 by direct count.
    let csv = String::from_utf8(first).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("10000,2,2625,")), "{csv}");

    let other = tempfile::tempdir().unwrap();
    let c = kmertens(other.path(), &[&args[..], &["--threads", "4"]].concat());
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(std::fs::read(other.path().join("out/ledger.csv")).unwrap(), second);
}

#[test]
fn verify_exit_codes_follow_the_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let o = kmertens(dir.path(), &["verify", "--limit", "10000"]);
    let out = stdout(&o);
    assert!(out.contains("thm16_explicit"));
    assert!(dir.path().join("out/manifest.csv").exists());
    assert!(dir.path().join("out/manifest.json").exists());
    let pass = out.contains("overall: PASS");
    assert_eq!(o.status.code(), Some(if pass { 0 } else { 1 }), "{out}");

    // A grid without the anchor points fails checks but still writes a manifest.
    let sparse = tempfile::tempdir().unwrap();
    let o = kmertens(sparse.path(), &["verify", "--limit", "1000", "--checkpoints", "500"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("overall: FAIL"));
    assert!(sparse.path().join("out/manifest.csv").exists());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "--limit", "1"][..],
        &["verify", "--checkpoints", "log:2"],
        &["sieve", "--config", "/nonexistent/run.toml"],
        &["constants", "--digits", "3"],
        &["frobnicate"],
    ] {
        let o = kmertens(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "sieve_limit = 100\nbogus = 1\n").unwrap();
    let o = kmertens(dir.path(), &["sieve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn corrupted_cache_reports_a_checksum_error() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sieve", "--limit", "5000"];
    assert_eq!(kmertens(dir.path(), &args).status.code(), Some(0));
    let file = std::fs::read_dir(dir.path().join("cache")).unwrap().next().unwrap().unwrap().path();
    let mut bytes = std::fs::read(&file).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    std::fs::write(&file, bytes).unwrap();
    let o = kmertens(dir.path(), &args);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
}

#[test]
fn export_writes_every_artifact_with_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let o = kmertens(dir.path(), &["export", "--limit", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let names = ["constants.json", "ledger.csv", "polynomials.json", "alpha.json"];
    let texts: Vec<String> = names
        .iter()
        .map(|n| std::fs::read_to_string(dir.path().join("out").join(n)).unwrap())
        .collect();
    let hash = texts[1].lines().next().unwrap().trim_start_matches("# config_hash: ").to_string();
    assert_eq!(hash.len(), 64);
    for (n, t) in names.iter().zip(&texts) {
        assert!(t.contains(&hash), "{n} lacks the config hash");
    }
}
