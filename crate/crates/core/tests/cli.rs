use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use patent_rent::pipeline::{RunManifest, MANIFEST_FILE};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_patent-rent");

const PARAMS: &str = "sigma = 2.0
d = 0.3

[beta]
intercept = 5.0
chemical = -0.3
mechanical = 0.4
electrical = 0.5
instruments = 0.0
family_size = 0.1
inventor_size = 0.05
grant_lag = -0.1
tech_scope = 0.2
";

const SMALL_GA: &str = "population_size = 200
generations = 4
starts = 2
elite_size = 20
";

fn patent_rent(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .current_dir(dir)
        .env_remove("PATENT_RENT_THREADS")
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = patent_rent(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn setup(n: usize) -> TempDir {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("params.toml"), PARAMS).unwrap();
    fs::write(tmp.path().join("ga.toml"), SMALL_GA).unwrap();
    let n = n.to_string();
    ok(
        tmp.path(),
        &["synth", "--params", "params.toml", "--n", &n, "--schedule", "india", "--seed", "5", "--out", "synth"],
    );
    tmp
}

fn estimate(dir: &Path, out: &str, threads: &str) {
    ok(
        dir,
        &[
            "estimate", "--records", "synth/records.csv", "--schedule", "india", "--ga-config", "ga.toml", "--seed", "11",
            "--threads", threads, "--out", out,
        ],
    );
}

fn value(dir: &Path, out: &str, threads: &str, draws: &str) {
    ok(
        dir,
        &[
            "value", "--records", "synth/records.csv", "--estimation", "fit/estimation.json", "--draws", draws,
            "--ensemble", "--ensemble-draws", "50", "--seed", "12", "--threads", threads, "--out", out,
        ],
    );
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != MANIFEST_FILE)
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn values(dir: &Path) -> Vec<HashMap<String, String>> {
    let mut reader = csv::Reader::from_path(dir.join("values.csv")).unwrap();
    reader.deserialize().map(|r| r.unwrap()).collect()
}

#[test]
fn synth_writes_parseable_records() {
    let tmp = setup(10);
    let text = fs::read_to_string(tmp.path().join("synth/records.csv")).unwrap();
    assert_eq!(text.lines().count(), 11);
    let (records, report) = patent_rent::parse_records(&text).unwrap();
    assert_eq!(records.len(), 10);
    assert!(report.rejected.is_empty());
    let manifest = RunManifest::load(&tmp.path().join("synth").join(MANIFEST_FILE)).unwrap();
    assert_eq!(manifest.seed, 5);
    assert_eq!(manifest.outputs.len(), 1);
}

#[test]
fn missing_column_exits_with_input_error() {
    let tmp = setup(60);
    let text = fs::read_to_string(tmp.path().join("synth/records.csv")).unwrap();
    let dropped: String = text
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string() + "\n")
        .collect();
    fs::write(tmp.path().join("bad.csv"), dropped).unwrap();
    let out = patent_rent(
        tmp.path(),
        &["estimate", "--records", "bad.csv", "--schedule", "india", "--seed", "1", "--out", "x"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn ambiguous_schedule_reference_is_rejected() {
    let tmp = setup(60);
    fs::write(tmp.path().join("india"), "").unwrap();
    let out = patent_rent(
        tmp.path(),
        &["estimate", "--records", "synth/records.csv", "--schedule", "india", "--seed", "1", "--out", "x"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ambiguous") || String::from_utf8_lossy(&out.stderr).contains("both"));
}

#[test]
fn missing_seed_is_a_usage_error() {
    let tmp = setup(10);
    let out = patent_rent(
        tmp.path(),
        &["estimate", "--records", "synth/records.csv", "--schedule", "india", "--out", "x"],
    );
    assert!(!out.status.success());
}

#[test]
fn single_draw_flags_unreliable_standard_error() {
    let tmp = setup(60);
    estimate(tmp.path(), "fit", "2");
    ok(
        tmp.path(),
        &[
            "value", "--records", "synth/records.csv", "--estimation", "fit/estimation.json", "--draws", "1", "--seed", "3",
            "--out", "one",
        ],
    );
    let est = values(&tmp.path().join("one"));
    assert_eq!(est.len(), 60);
    assert!(est.iter().all(|e| e["mc_se_reliable"] == "false" && e["draws"] == "1"));
}

#[test]
fn outputs_do_not_depend_on_threads_and_rerun_reproduces() {
    let tmp = setup(150);
    let dir = tmp.path();
    estimate(dir, "fit", "1");
    estimate(dir, "fit8", "8");
    assert_eq!(outputs(&dir.join("fit")), outputs(&dir.join("fit8")));

    value(dir, "val1", "1", "200");
    value(dir, "val8", "8", "200");
    let base = outputs(&dir.join("val1"));
    assert_eq!(base, outputs(&dir.join("val8")));
    assert!(base.iter().any(|(n, _)| n == "expiry_shares.csv"));
    assert!(values(&dir.join("val1")).iter().all(|e| !e["ensemble_band_lo"].is_empty()));

    let manifest: PathBuf = dir.join("val1").join(MANIFEST_FILE);
    ok(dir, &["rerun", "--manifest", manifest.to_str().unwrap(), "--out", "again", "--threads", "3"]);
    assert_eq!(base, outputs(&dir.join("again")));
    let m = RunManifest::load(&dir.join("again").join(MANIFEST_FILE)).unwrap();
    assert_eq!(m.seed, 12);
    assert!(m.inputs.iter().all(|i| i.path.is_absolute()));
}

#[test]
fn rerun_refuses_changed_inputs() {
    let tmp = setup(20);
    let dir = tmp.path();
    fs::write(dir.join("params.toml"), PARAMS.replace("d = 0.3", "d = 0.25")).unwrap();
    let manifest = dir.join("synth").join(MANIFEST_FILE);
    let out = patent_rent(dir, &["rerun", "--manifest", manifest.to_str().unwrap(), "--out", "again"]);
    assert_eq!(out.status.code(), Some(2));
}
