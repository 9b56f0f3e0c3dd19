//! Summary tables over records and per-patent value estimates.
//!
//! Every table has a CSV form with full-precision numbers and an aligned
//! plain-text rendering rounded for reading. Aggregation is sequential so
//! output bytes are stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::PatentRecord;
use crate::error::{Error, Result};
use crate::model::{Ownership, TechField};
use crate::simulate::ValueEstimate;
use crate::stats;

/// (label, first age, last age) of each expiry bucket.
pub const EXPIRY_BUCKETS: [(&str, u32, u32); 5] = [
    ("Never Renewed", 2, 2),
    ("3rd to 6th year", 3, 6),
    ("7th to 10 th year", 7, 10),
    ("11th to 15th year", 11, 15),
    ("16th to 20th year", 16, 20),
];

pub fn field_title(f: TechField) -> &'static str {
    match f {
        TechField::Chemical => "Chemical",
        TechField::Mechanical => "Mechanical",
        TechField::Instruments => "Instruments",
        TechField::Electrical => "Electrical",
        TechField::Others => "Others",
    }
}

pub fn ownership_title(o: Ownership) -> &'static str {
    match o {
        Ownership::ForeignSubsidiary => "Foreign Subsidiary",
        Ownership::Domestic => "Domestic Firms",
    }
}

/// Multiplier and unit label applied to every money cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoneyScale {
    pub factor: f64,
    pub unit: String,
}

impl MoneyScale {
    pub fn identity(unit: impl Into<String>) -> Self {
        Self {
            factor: 1.0,
            unit: unit.into(),
        }
    }

    /// Dollars to millions of dollars.
    pub fn millions() -> Self {
        Self {
            factor: 1e-6,
            unit: "$M".into(),
        }
    }
}

impl Default for MoneyScale {
    fn default() -> Self {
        Self::millions()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpiryShareRow {
    pub label: String,
    /// Percentages per bucket, in [`EXPIRY_BUCKETS`] order.
    pub shares: [f64; 5],
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpiryShareTable {
    /// One row per technology present, in report order.
    pub rows: Vec<ExpiryShareRow>,
    /// Unweighted mean of the technology rows; count is the total.
    pub average: ExpiryShareRow,
}

fn bucket_of(age: u32) -> usize {
    EXPIRY_BUCKETS
        .iter()
        .position(|&(_, lo, hi)| lo <= age && age <= hi)
        .unwrap_or(if age < 2 { 0 } else { EXPIRY_BUCKETS.len() - 1 })
}

/// Percentage of patents per technology expiring in each age bucket.
pub fn expiry_share_table(records: &[PatentRecord]) -> Result<ExpiryShareTable> {
    if records.is_empty() {
        return Err(Error::Report("no records".into()));
    }
    let mut rows = Vec::new();
    for field in TechField::ALL {
        let mut counts = [0usize; 5];
        for r in records.iter().filter(|r| r.covariates.tech_field == field) {
            counts[bucket_of(r.expiry_age)] += 1;
        }
        let n: usize = counts.iter().sum();
        if n == 0 {
            continue;
        }
        rows.push(ExpiryShareRow {
            label: field_title(field).into(),
            shares: counts.map(|c| 100.0 * c as f64 / n as f64),
            count: n,
        });
    }
    let shares = std::array::from_fn(|b| stats::mean(&rows.iter().map(|r| r.shares[b]).collect::<Vec<_>>()));
    let average = ExpiryShareRow {
        label: "Average".into(),
        shares,
        count: records.len(),
    };
    Ok(ExpiryShareTable { rows, average })
}

impl ExpiryShareTable {
    fn header() -> Vec<String> {
        let mut h = vec!["Technology Category".to_string()];
        h.extend(EXPIRY_BUCKETS.iter().map(|b| b.0.to_string()));
        h.push("Total Patents".into());
        h
    }

    fn all_rows(&self) -> impl Iterator<Item = &ExpiryShareRow> {
        self.rows.iter().chain(std::iter::once(&self.average))
    }

    pub fn to_csv(&self) -> String {
        let rows = self.all_rows().map(|r| {
            let mut cells = vec![r.label.clone()];
            cells.extend(r.shares.iter().map(|s| s.to_string()));
            cells.push(r.count.to_string());
            Some(cells)
        });
        csv_text(&Self::header(), rows)
    }

    pub fn render(&self) -> String {
        let rows = self.all_rows().map(|r| {
            let mut cells = vec![r.label.clone()];
            cells.extend(r.shares.iter().map(|s| format!("{s:.3}")));
            cells.push(r.count.to_string());
            Some(cells)
        });
        aligned_text(&Self::header(), rows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKey {
    Technology,
    Ownership,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoneyField {
    /// Per-patent mean initial return r(0).
    R0,
    /// Per-patent mean lifetime value.
    Npv,
}

impl MoneyField {
    fn of(self, e: &ValueEstimate) -> f64 {
        match self {
            MoneyField::R0 => e.r0_mean,
            MoneyField::Npv => e.npv_mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRow {
    pub label: String,
    pub count: usize,
    pub patent_share: f64,
    pub value_share: f64,
    pub mean: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedValueTable {
    pub key: GroupKey,
    pub money_field: MoneyField,
    pub scale: MoneyScale,
    pub groups: Vec<GroupRow>,
}

fn lookup<'a>(
    records: &'a [PatentRecord],
    estimates: &'a [ValueEstimate],
) -> Result<Vec<(&'a PatentRecord, &'a ValueEstimate)>> {
    let by_id: BTreeMap<&str, &ValueEstimate> = estimates.iter().map(|e| (e.patent_id.as_str(), e)).collect();
    records
        .iter()
        .map(|r| {
            by_id
                .get(r.patent_id.as_str())
                .map(|e| (r, *e))
                .ok_or_else(|| Error::Report(format!("no value estimate for patent {}", r.patent_id)))
        })
        .collect()
}

/// Patent share, value share, mean and median of per-patent values by group.
pub fn value_by_group(
    records: &[PatentRecord],
    estimates: &[ValueEstimate],
    key: GroupKey,
    money_field: MoneyField,
    scale: &MoneyScale,
) -> Result<GroupedValueTable> {
    if records.is_empty() {
        return Err(Error::Report("no records".into()));
    }
    let pairs = lookup(records, estimates)?;
    let labels: Vec<(&str, Box<dyn Fn(&PatentRecord) -> bool>)> = match key {
        GroupKey::Technology => TechField::ALL
            .iter()
            .map(|&f| {
                let test: Box<dyn Fn(&PatentRecord) -> bool> = Box::new(move |r| r.covariates.tech_field == f);
                (field_title(f), test)
            })
            .collect(),
        GroupKey::Ownership => Ownership::ALL
            .iter()
            .map(|&o| {
                let test: Box<dyn Fn(&PatentRecord) -> bool> = Box::new(move |r| r.covariates.ownership == o);
                (ownership_title(o), test)
            })
            .collect(),
    };
    let values = |pred: &dyn Fn(&PatentRecord) -> bool| -> Vec<f64> {
        pairs
            .iter()
            .filter(|(r, _)| pred(r))
            .map(|(_, e)| money_field.of(e) * scale.factor)
            .collect()
    };
    let grand = stats::pairwise_sum(&pairs.iter().map(|(_, e)| money_field.of(e) * scale.factor).collect::<Vec<_>>());
    if !(grand != 0.0 && grand.is_finite()) {
        return Err(Error::Report(format!("total value {grand} cannot be shared out")));
    }
    let total = pairs.len() as f64;
    let groups = labels
        .iter()
        .filter_map(|(label, pred)| {
            let v = values(pred.as_ref());
            (!v.is_empty()).then(|| GroupRow {
                label: label.to_string(),
                count: v.len(),
                patent_share: 100.0 * v.len() as f64 / total,
                value_share: 100.0 * stats::pairwise_sum(&v) / grand,
                mean: stats::mean(&v),
                median: stats::median(&v),
            })
        })
        .collect();
    Ok(GroupedValueTable {
        key,
        money_field,
        scale: scale.clone(),
        groups,
    })
}

impl GroupedValueTable {
    fn header(&self) -> Vec<String> {
        vec![
            "Technology/Ownership".into(),
            "Patent Share".into(),
            "Value Share".into(),
            format!("Mean ({})", self.scale.unit),
            format!("Median ({})", self.scale.unit),
        ]
    }

    pub fn to_csv(&self) -> String {
        let rows = self.groups.iter().map(|g| {
            Some(vec![
                g.label.clone(),
                g.patent_share.to_string(),
                g.value_share.to_string(),
                g.mean.to_string(),
                g.median.to_string(),
            ])
        });
        csv_text(&self.header(), rows)
    }

    fn text_rows(&self) -> impl Iterator<Item = Option<Vec<String>>> + '_ {
        self.groups.iter().map(|g| {
            Some(vec![
                g.label.clone(),
                format!("{:.2}", g.patent_share),
                format!("{:.2}", g.value_share),
                format!("{:.3}", g.mean),
                format!("{:.3}", g.median),
            ])
        })
    }

    pub fn render(&self) -> String {
        aligned_text(&self.header(), self.text_rows())
    }
}

/// Technology and ownership tables stacked under one header with a blank
/// separator row.
pub fn render_value_tables(technology: &GroupedValueTable, ownership: &GroupedValueTable) -> String {
    let rows = technology
        .text_rows()
        .chain(std::iter::once(None))
        .chain(ownership.text_rows());
    aligned_text(&technology.header(), rows)
}

pub const DEFAULT_QUANTILES: [f64; 6] = [0.25, 0.50, 0.75, 0.90, 0.95, 0.99];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileColumn {
    pub label: String,
    pub quantiles: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileTable {
    pub probs: Vec<f64>,
    pub scale: MoneyScale,
    /// One column per technology present, in report order.
    pub columns: Vec<QuantileColumn>,
}

/// Distribution of per-patent lifetime values within each technology.
pub fn quantile_table(
    records: &[PatentRecord],
    estimates: &[ValueEstimate],
    probs: &[f64],
    scale: &MoneyScale,
) -> Result<QuantileTable> {
    if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::Report("quantile probabilities must lie in [0, 1]".into()));
    }
    let pairs = lookup(records, estimates)?;
    let mut probs = probs.to_vec();
    probs.sort_by(f64::total_cmp);
    let columns = TechField::ALL
        .iter()
        .filter_map(|&f| {
            let v: Vec<f64> = pairs
                .iter()
                .filter(|(r, _)| r.covariates.tech_field == f)
                .map(|(_, e)| e.npv_mean * scale.factor)
                .collect();
            if v.is_empty() {
                return None;
            }
            let sorted = stats::sorted_copy(&v);
            Some(QuantileColumn {
                label: field_title(f).into(),
                quantiles: probs.iter().map(|&p| stats::quantile_sorted(&sorted, p)).collect(),
                mean: stats::mean(&v),
                sd: stats::sample_sd(&v),
                count: v.len(),
            })
        })
        .collect();
    Ok(QuantileTable {
        probs,
        scale: scale.clone(),
        columns,
    })
}

fn percent_label(p: f64) -> String {
    let pct = 100.0 * p;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{}%", pct.round())
    } else {
        format!("{pct}%")
    }
}

impl QuantileTable {
    fn header(&self) -> Vec<String> {
        let mut h = vec!["Quantile (%)".to_string()];
        h.extend(self.columns.iter().map(|c| c.label.clone()));
        h
    }

    fn grid(&self, num: impl Fn(f64) -> String) -> Vec<Option<Vec<String>>> {
        let mut rows = Vec::new();
        for (i, &p) in self.probs.iter().enumerate() {
            let mut r = vec![percent_label(p)];
            r.extend(self.columns.iter().map(|c| num(c.quantiles[i])));
            rows.push(Some(r));
        }
        let stat = |name: &str, f: &dyn Fn(&QuantileColumn) -> String| {
            let mut r = vec![name.to_string()];
            r.extend(self.columns.iter().map(f));
            Some(r)
        };
        rows.push(stat("Mean", &|c| num(c.mean)));
        rows.push(stat("Std. Dev.", &|c| num(c.sd)));
        rows.push(stat("Obs.", &|c| c.count.to_string()));
        rows
    }

    pub fn to_csv(&self) -> String {
        csv_text(&self.header(), self.grid(|x| x.to_string()))
    }

    pub fn render(&self) -> String {
        aligned_text(&self.header(), self.grid(|x| format!("{x:.3}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgePoint {
    pub age: u32,
    pub count: usize,
    pub mean_log_r0: f64,
}

/// Mean simulated log r(0) by expiry age, for plotting value against age.
pub fn age_trend(records: &[PatentRecord], estimates: &[ValueEstimate]) -> Result<Vec<AgePoint>> {
    let pairs = lookup(records, estimates)?;
    let mut by_age: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for (r, e) in pairs {
        by_age.entry(r.expiry_age).or_default().push(e.log_r0_mean);
    }
    Ok(by_age
        .into_iter()
        .map(|(age, v)| AgePoint {
            age,
            count: v.len(),
            mean_log_r0: stats::mean(&v),
        })
        .collect())
}

pub fn age_trend_csv(points: &[AgePoint]) -> String {
    let header = ["age".to_string(), "n".into(), "mean_log_r0".into()];
    csv_text(
        &header,
        points
            .iter()
            .map(|p| Some(vec![p.age.to_string(), p.count.to_string(), p.mean_log_r0.to_string()])),
    )
}

/// One row per patent: point-estimate summaries and, when present, the
/// ensemble band.
pub fn values_csv(estimates: &[ValueEstimate]) -> String {
    let mut header: Vec<String> = [
        "patent_id",
        "expiry_age",
        "draws",
        "r0_mean",
        "r0_mean_se",
        "mc_se_reliable",
        "r0_median",
    ]
    .map(String::from)
    .to_vec();
    let probs: Vec<f64> = estimates
        .first()
        .map(|e| e.r0_quantiles.iter().map(|q| q.0).collect())
        .unwrap_or_default();
    header.extend(probs.iter().map(|p| format!("r0_q{}", percent_label(*p).trim_end_matches('%'))));
    header.extend(
        [
            "log_r0_mean",
            "npv_mean",
            "npv_median",
            "ensemble_log_r0",
            "ensemble_band_lo",
            "ensemble_band_hi",
        ]
        .map(String::from),
    );
    let rows = estimates.iter().map(|e| {
        let mut r = vec![
            e.patent_id.clone(),
            e.expiry_age.to_string(),
            e.draws_used.to_string(),
            e.r0_mean.to_string(),
            e.r0_mean_se.to_string(),
            e.mc_se_reliable.to_string(),
            e.r0_median.to_string(),
        ];
        r.extend(e.r0_quantiles.iter().map(|q| q.1.to_string()));
        r.extend([e.log_r0_mean.to_string(), e.npv_mean.to_string(), e.npv_median.to_string()]);
        match &e.ensemble {
            Some(s) => r.extend([s.log_r0.to_string(), s.band.0.to_string(), s.band.1.to_string()]),
            None => r.extend([String::new(), String::new(), String::new()]),
        }
        Some(r)
    });
    csv_text(&header, rows)
}

/// Variable summaries by technology plus the overall block.
pub fn render_descriptive(stats: &crate::data::DescriptiveStats) -> String {
    let header: Vec<String> = ["Variable", "Obs.", "Mean", "Std. Dev.", "Min", "Max"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let blocks = stats
        .by_field
        .iter()
        .map(|f| (field_title(f.field), f.obs, &f.variables))
        .chain(std::iter::once(("All", stats.overall.obs, &stats.overall.variables)));
    for (i, (title, obs, vars)) in blocks.enumerate() {
        if i > 0 {
            rows.push(None);
        }
        rows.push(Some(vec![title.to_string(), String::new(), String::new(), String::new(), String::new(), String::new()]));
        for v in vars {
            rows.push(Some(vec![
                v.name.clone(),
                obs.to_string(),
                format!("{:.3}", v.mean),
                format!("{:.3}", v.sd),
                format!("{:.3}", v.min),
                format!("{:.3}", v.max),
            ]));
        }
    }
    aligned_text(&header, rows)
}

fn csv_text(header: &[String], rows: impl IntoIterator<Item = Option<Vec<String>>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows.into_iter().flatten() {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

// First column left-aligned, the rest right-aligned, two spaces between
// columns. `None` rows print as blank lines.
fn aligned_text(header: &[String], rows: impl IntoIterator<Item = Option<Vec<String>>>) -> String {
    let rows: Vec<Option<Vec<String>>> = rows.into_iter().collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows.iter().flatten() {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i == 0 {
                s.push_str(&format!("{c:<w$}"));
            } else {
                s.push_str(&format!("  {c:>w$}"));
            }
        }
        s.trim_end().to_string()
    };
    let mut out = line(header);
    out.push('\n');
    for r in &rows {
        if let Some(cells) = r {
            out.push_str(&line(cells));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CovariateVector;

    fn rec(id: &str, age: u32, field: TechField, own: Ownership) -> PatentRecord {
        PatentRecord {
            patent_id: id.into(),
            application_year: 2000,
            expiry_age: age,
            covariates: CovariateVector {
                family_size: 1.0,
                inventor_size: 1.0,
                grant_lag: 5.0,
                tech_scope: 1.0,
                tech_field: field,
                ownership: own,
            },
            tech_field_raw: field.label().into(),
            ownership_raw: own.label().into(),
        }
    }

    fn est(id: &str, value: f64) -> ValueEstimate {
        ValueEstimate {
            patent_id: id.into(),
            expiry_age: 2,
            r0_mean: value,
            r0_mean_se: 0.0,
            r0_median: value,
            r0_quantiles: vec![],
            log_r0_mean: value.ln(),
            npv_mean: value,
            npv_median: value,
            draws_used: 1,
            mc_se_reliable: false,
            ensemble: None,
        }
    }

    #[test]
    fn all_never_renewed() {
        let recs: Vec<_> = (0..4).map(|i| rec(&i.to_string(), 2, TechField::Chemical, Ownership::Domestic)).collect();
        let t = expiry_share_table(&recs).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].shares, [100.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(t.average.count, 4);
    }

    #[test]
    fn uniform_ages_fill_buckets_by_width() {
        let recs: Vec<_> = (2..=20).map(|a| rec(&a.to_string(), a, TechField::Mechanical, Ownership::Domestic)).collect();
        let t = expiry_share_table(&recs).unwrap();
        for (s, w) in t.rows[0].shares.iter().zip([1.0, 4.0, 4.0, 5.0, 5.0]) {
            assert!((s - 100.0 * w / 19.0).abs() < 1e-12);
        }
        assert!((t.average.shares.iter().sum::<f64>() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn header_labels() {
        let recs = vec![rec("a", 2, TechField::Chemical, Ownership::Domestic)];
        let csv = expiry_share_table(&recs).unwrap().to_csv();
        assert_eq!(
            csv.lines().next().unwrap(),
            "Technology Category,Never Renewed,3rd to 6th year,7th to 10 th year,11th to 15th year,16th to 20th year,Total Patents"
        );
    }

    #[test]
    fn single_group_holds_everything() {
        let recs = vec![rec("a", 2, TechField::Chemical, Ownership::Domestic), rec("b", 5, TechField::Chemical, Ownership::Domestic)];
        let ests = vec![est("a", 1.0), est("b", 3.0)];
        let t = value_by_group(&recs, &ests, GroupKey::Technology, MoneyField::R0, &MoneyScale::identity("$")).unwrap();
        assert_eq!(t.groups.len(), 1);
        assert_eq!(t.groups[0].patent_share, 100.0);
        assert_eq!(t.groups[0].value_share, 100.0);
        assert_eq!(t.groups[0].mean, 2.0);
    }

    #[test]
    fn zero_valued_group_gets_no_value_share() {
        let recs = vec![
            rec("a", 2, TechField::Chemical, Ownership::Domestic),
            rec("b", 2, TechField::Electrical, Ownership::Domestic),
        ];
        let ests = vec![est("a", 0.0), est("b", 7.0)];
        let t = value_by_group(&recs, &ests, GroupKey::Technology, MoneyField::Npv, &MoneyScale::identity("$")).unwrap();
        let shares: Vec<(f64, f64)> = t.groups.iter().map(|g| (g.patent_share, g.value_share)).collect();
        assert_eq!(shares, vec![(50.0, 0.0), (50.0, 100.0)]);
    }

    #[test]
    fn missing_estimate_names_the_patent() {
        let recs = vec![rec("IN123", 2, TechField::Chemical, Ownership::Domestic)];
        let err = value_by_group(&recs, &[], GroupKey::Ownership, MoneyField::R0, &MoneyScale::default()).unwrap_err();
        assert!(err.to_string().contains("IN123"));
    }

    #[test]
    fn deflator_scales_money_only() {
        let recs = vec![
            rec("a", 2, TechField::Chemical, Ownership::Domestic),
            rec("b", 2, TechField::Chemical, Ownership::ForeignSubsidiary),
        ];
        let ests = vec![est("a", 2e6), est("b", 6e6)];
        let raw = value_by_group(&recs, &ests, GroupKey::Ownership, MoneyField::R0, &MoneyScale::identity("$")).unwrap();
        let m = value_by_group(&recs, &ests, GroupKey::Ownership, MoneyField::R0, &MoneyScale::millions()).unwrap();
        for (a, b) in raw.groups.iter().zip(&m.groups) {
            assert_eq!(a.patent_share, b.patent_share);
            assert!((a.value_share - b.value_share).abs() < 1e-9);
            assert!((a.mean * 1e-6 - b.mean).abs() < 1e-12);
        }
        assert_eq!(m.groups[0].label, "Foreign Subsidiary");
    }

    #[test]
    fn one_patent_column_is_flat() {
        let recs = vec![rec("a", 2, TechField::Instruments, Ownership::Domestic)];
        let q = quantile_table(&recs, &[est("a", 4.0)], &DEFAULT_QUANTILES, &MoneyScale::identity("$")).unwrap();
        assert!(q.columns[0].quantiles.iter().all(|&v| v == 4.0));
        assert_eq!(q.columns[0].count, 1);
        let text = q.render();
        assert!(text.starts_with("Quantile (%)  Instruments\n25%"));
        assert!(text.contains("Obs."));
    }

    #[test]
    fn aligned_text_layout() {
        let h = vec!["Name".to_string(), "Value".to_string()];
        let out = aligned_text(&h, vec![Some(vec!["a".into(), "1.000".into()]), None, Some(vec!["bbbbbb".into(), "2".into()])]);
        assert_eq!(out, "Name    Value\na       1.000\n\nbbbbbb      2\n");
    }
}
