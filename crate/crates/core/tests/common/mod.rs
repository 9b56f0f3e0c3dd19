//! Frozen report fixture shared by the golden and acceptance tests.

#![allow(dead_code)]

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use patent_rent::report::{
    age_trend, age_trend_csv, expiry_share_table, quantile_table, render_value_tables, value_by_group, GroupKey,
    MoneyField, MoneyScale, DEFAULT_QUANTILES,
};
use patent_rent::{parse_records, PatentRecord, ValueEstimate};

pub fn dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

pub fn fixture() -> (Vec<PatentRecord>, Vec<ValueEstimate>) {
    let text = fs::read_to_string(dir("fixtures").join("records.csv")).unwrap();
    let (records, report) = parse_records(&text).unwrap();
    assert!(report.rejected.is_empty());

    let mut reader = csv::Reader::from_path(dir("fixtures").join("values.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    let estimates = reader
        .records()
        .map(|row| {
            let row = row.unwrap();
            let m: HashMap<&str, &str> = headers.iter().zip(row.iter()).collect();
            let f = |k: &str| m[k].parse::<f64>().unwrap();
            let r0_quantiles = headers
                .iter()
                .filter_map(|h| h.strip_prefix("r0_q"))
                .map(|p| (p.parse::<f64>().unwrap() / 100.0, f(&format!("r0_q{p}"))))
                .collect();
            ValueEstimate {
                patent_id: m["patent_id"].to_string(),
                expiry_age: m["expiry_age"].parse().unwrap(),
                r0_mean: f("r0_mean"),
                r0_mean_se: f("r0_mean_se"),
                r0_median: f("r0_median"),
                r0_quantiles,
                log_r0_mean: f("log_r0_mean"),
                npv_mean: f("npv_mean"),
                npv_median: f("npv_median"),
                draws_used: m["draws"].parse().unwrap(),
                mc_se_reliable: m["mc_se_reliable"] == "true",
                ensemble: None,
            }
        })
        .collect();
    (records, estimates)
}

pub fn check(name: &str, actual: &str) {
    let path = dir("golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from golden:\n{actual}");
}

pub fn dollars() -> MoneyScale {
    MoneyScale::identity("$")
}

/// Every golden rendering of the fixture, keyed by file name.
pub fn renderings() -> Vec<(String, String)> {
    let (records, est) = fixture();
    let shares = expiry_share_table(&records).unwrap();
    let mut out = vec![
        ("expiry_shares.txt".to_string(), shares.render()),
        ("expiry_shares.csv".to_string(), shares.to_csv()),
    ];
    for (field, stem) in [(MoneyField::R0, "r0_by_group"), (MoneyField::Npv, "npv_by_group")] {
        let tech = value_by_group(&records, &est, GroupKey::Technology, field, &dollars()).unwrap();
        let own = value_by_group(&records, &est, GroupKey::Ownership, field, &dollars()).unwrap();
        out.push((format!("{stem}.txt"), render_value_tables(&tech, &own)));
        out.push((format!("{stem}_technology.csv"), tech.to_csv()));
        out.push((format!("{stem}_ownership.csv"), own.to_csv()));
    }
    let q = quantile_table(&records, &est, &DEFAULT_QUANTILES, &dollars()).unwrap();
    out.push(("npv_quantiles.txt".to_string(), q.render()));
    out.push(("npv_quantiles.csv".to_string(), q.to_csv()));
    out.push(("age_trend.csv".to_string(), age_trend_csv(&age_trend(&records, &est).unwrap())));
    out
}
