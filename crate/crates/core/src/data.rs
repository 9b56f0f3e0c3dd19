//! Patent record ingestion, synthetic cohorts and descriptive statistics.
//!
//! Input files are comma-separated with a fixed header:
//!
//! ```text
//! patent_id,application_year,expiry_age,family_size,inventor_count,grant_lag_years,tech_scope,tech_field,ownership,censored
//! ```
//!
//! Row-level problems reject the row and never abort the file; only a missing
//! required column is fatal.

use std::collections::{BTreeMap, HashSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fee_schedule::FeeSchedule;
use crate::likelihood::ThresholdTable;
use crate::model::{self, CovariateVector, ModelConfig, ModelParams, Ownership, TechField};
use crate::seeding;
use crate::stats;

pub const COLUMNS: [&str; 10] = [
    "patent_id",
    "application_year",
    "expiry_age",
    "family_size",
    "inventor_count",
    "grant_lag_years",
    "tech_scope",
    "tech_field",
    "ownership",
    "censored",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentRecord {
    pub patent_id: String,
    pub application_year: i32,
    /// Expiry age T: 2 codes "never renewed", 20 the full statutory term.
    pub expiry_age: u32,
    pub covariates: CovariateVector,
    pub tech_field_raw: String,
    pub ownership_raw: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedRow {
    /// 1-based data row (header excluded).
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejected: Vec<RejectedRow>,
    pub warnings: Vec<String>,
}

impl IngestReport {
    pub fn total_rows(&self) -> usize {
        self.accepted + self.rejected.len()
    }
}

/// Maps raw IPC codes to technology fields by longest matching prefix.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IpcPrefixMap {
    prefixes: Vec<(String, TechField)>,
}

impl IpcPrefixMap {
    pub fn new(mut prefixes: Vec<(String, TechField)>) -> Self {
        prefixes.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Self { prefixes }
    }

    /// One `PREFIX = field` pair per line; `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (prefix, field) = line
                .split_once('=')
                .ok_or_else(|| Error::Ingest(format!("prefix map line {}: expected `PREFIX = field`", i + 1)))?;
            let field = field
                .trim()
                .parse()
                .map_err(|e| Error::Ingest(format!("prefix map line {}: {e}", i + 1)))?;
            out.push((normalize_ipc(prefix), field));
        }
        Ok(Self::new(out))
    }

    pub fn lookup(&self, raw: &str) -> Option<TechField> {
        let code = normalize_ipc(raw);
        self.prefixes
            .iter()
            .find(|(p, _)| code.starts_with(p.as_str()))
            .map(|&(_, f)| f)
    }
}

fn normalize_ipc(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_uppercase()
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub ipc_prefix_map: Option<IpcPrefixMap>,
}

pub fn parse_records(text: &str) -> Result<(Vec<PatentRecord>, IngestReport)> {
    parse_records_with(text, &IngestOptions::default())
}

pub fn parse_records_with(text: &str, options: &IngestOptions) -> Result<(Vec<PatentRecord>, IngestReport)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Ingest(format!("unreadable header: {e}")))?
        .clone();
    let mut index = [0usize; COLUMNS.len()];
    let mut missing = Vec::new();
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        match headers.iter().position(|h| h == name) {
            Some(i) => *slot = i,
            None => missing.push(name),
        }
    }
    if !missing.is_empty() {
        return Err(Error::Ingest(format!("missing required column(s): {}", missing.join(", "))));
    }
    let mut report = IngestReport::default();
    let extra: Vec<&str> = headers.iter().filter(|h| !COLUMNS.contains(h)).collect();
    if !extra.is_empty() {
        report.warnings.push(format!("ignored extra column(s): {}", extra.join(", ")));
    }

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                report.rejected.push(RejectedRow {
                    row: row_no,
                    reason: format!("malformed row: {e}"),
                });
                continue;
            }
        };
        let field = |k: usize| row.get(index[k]).unwrap_or("");
        match parse_row(field, options) {
            Ok(RowOutcome::Censored(id)) => {
                report.rejected.push(RejectedRow {
                    row: row_no,
                    reason: "censored (non-expired) patent dropped".to_string(),
                });
                report.warnings.push(format!("row {row_no}: censored patent `{id}` dropped"));
            }
            Ok(RowOutcome::Record(rec)) => {
                if !seen.insert(rec.patent_id.clone()) {
                    report.rejected.push(RejectedRow {
                        row: row_no,
                        reason: format!("duplicate patent_id `{}`", rec.patent_id),
                    });
                } else {
                    records.push(rec);
                }
            }
            Err(reason) => report.rejected.push(RejectedRow { row: row_no, reason }),
        }
    }
    report.accepted = records.len();
    Ok((records, report))
}

enum RowOutcome {
    Record(PatentRecord),
    Censored(String),
}

fn parse_row<'r>(field: impl Fn(usize) -> &'r str, options: &IngestOptions) -> std::result::Result<RowOutcome, String> {
    let nonempty = |k: usize| -> std::result::Result<&'r str, String> {
        let v = field(k);
        if v.is_empty() {
            Err(format!("missing value for `{}`", COLUMNS[k]))
        } else {
            Ok(v)
        }
    };
    let number = |k: usize| -> std::result::Result<f64, String> {
        let v = nonempty(k)?;
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("`{}` = `{v}` is not a number", COLUMNS[k]))
    };
    let patent_id = nonempty(0)?.to_string();
    let censored = match nonempty(9)?.to_ascii_lowercase().as_str() {
        "true" => true,
        "false" => false,
        other => return Err(format!("`censored` = `{other}` must be true or false")),
    };
    if censored {
        return Ok(RowOutcome::Censored(patent_id));
    }
    let year_raw = nonempty(1)?;
    let application_year = year_raw
        .parse::<i32>()
        .map_err(|_| format!("`application_year` = `{year_raw}` is not an integer"))?;
    let age_raw = nonempty(2)?;
    let expiry_age = age_raw
        .parse::<u32>()
        .map_err(|_| format!("`expiry_age` = `{age_raw}` is not an integer"))?;
    if !(2..=20).contains(&expiry_age) {
        return Err(format!("`expiry_age` = {expiry_age} outside 2..=20"));
    }
    let tech_field_raw = nonempty(7)?.to_string();
    let tech_field = tech_field_raw
        .parse::<TechField>()
        .or_else(|e| {
            options
                .ipc_prefix_map
                .as_ref()
                .and_then(|m| m.lookup(&tech_field_raw))
                .ok_or(e)
        })?;
    let ownership_raw = nonempty(8)?.to_string();
    let ownership = ownership_raw.parse::<Ownership>()?;
    let covariates = CovariateVector {
        family_size: number(3)?,
        inventor_size: number(4)?,
        grant_lag: number(5)?,
        tech_scope: number(6)?,
        tech_field,
        ownership,
    };
    covariates.validate()?;
    Ok(RowOutcome::Record(PatentRecord {
        patent_id,
        application_year,
        expiry_age,
        covariates,
        tech_field_raw,
        ownership_raw,
    }))
}

/// Write records in the ingestion format (all rows uncensored).
pub fn serialize_records(records: &[PatentRecord]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for r in records {
        let x = &r.covariates;
        w.write_record([
            r.patent_id.clone(),
            r.application_year.to_string(),
            r.expiry_age.to_string(),
            x.family_size.to_string(),
            x.inventor_size.to_string(),
            x.grant_lag.to_string(),
            x.tech_scope.to_string(),
            r.tech_field_raw.clone(),
            r.ownership_raw.clone(),
            "false".to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// Shifted Poisson count: `min + Poisson(mean − min)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountSpec {
    pub min: f64,
    pub mean: f64,
}

impl CountSpec {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let lambda = self.mean - self.min;
        if lambda <= 0.0 {
            return self.min;
        }
        self.min + Poisson::new(lambda).expect("validated rate").sample(rng)
    }
}

/// Sampling law of synthetic covariates. Defaults follow the published
/// sample: mean family size ≈ 3, inventors ≈ 2.45, grant lag ≈ 7.25 years,
/// technology scope ≈ 1.06, field mix 237/100/31/170/17.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CovariateSpec {
    /// Weights in report order: chemical, mechanical, instruments, electrical, others.
    pub field_weights: [f64; 5],
    pub foreign_share: f64,
    pub family_size: CountSpec,
    pub inventor_size: CountSpec,
    pub grant_lag: CountSpec,
    pub tech_scope: CountSpec,
    pub first_year: i32,
    pub last_year: i32,
}

impl Default for CovariateSpec {
    fn default() -> Self {
        Self {
            field_weights: [237.0, 100.0, 31.0, 170.0, 17.0],
            foreign_share: 0.3358,
            family_size: CountSpec { min: 0.0, mean: 3.0 },
            inventor_size: CountSpec { min: 1.0, mean: 2.45 },
            grant_lag: CountSpec { min: 2.0, mean: 7.25 },
            tech_scope: CountSpec { min: 1.0, mean: 1.06 },
            first_year: 1999,
            last_year: 2002,
        }
    }
}

impl CovariateSpec {
    pub fn validate(&self) -> Result<()> {
        if self.field_weights.iter().any(|w| !(*w >= 0.0)) || self.field_weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::config("field weights must be nonnegative with a positive sum"));
        }
        if !(0.0..=1.0).contains(&self.foreign_share) {
            return Err(Error::config("foreign_share must lie in [0, 1]"));
        }
        let counts = [
            ("family_size", self.family_size, 0.0),
            ("inventor_size", self.inventor_size, 1.0),
            ("grant_lag", self.grant_lag, 0.0),
            ("tech_scope", self.tech_scope, 1.0),
        ];
        for (name, c, floor) in counts {
            if !(c.min >= floor && c.mean >= c.min && c.mean.is_finite()) {
                return Err(Error::config(format!("{name}: need min >= {floor} and mean >= min")));
            }
        }
        if self.first_year > self.last_year {
            return Err(Error::config("first_year after last_year"));
        }
        Ok(())
    }
}

/// Draw a synthetic cohort from known parameters. Each patent gets its own
/// derived random stream, so the output depends only on `seed`.
pub fn generate_synthetic(
    true_params: &ModelParams,
    n: usize,
    schedule: &FeeSchedule,
    config: &ModelConfig,
    spec: &CovariateSpec,
    seed: u64,
) -> Result<Vec<PatentRecord>> {
    if n < 1 {
        return Err(Error::domain("synthetic cohort size must be at least 1"));
    }
    true_params.validate()?;
    spec.validate()?;
    let table = ThresholdTable::build(schedule, true_params.d, config)?;
    let fields = WeightedIndex::new(spec.field_weights).map_err(|e| Error::config(e.to_string()))?;
    let noise = Normal::new(0.0, true_params.sigma).map_err(|e| Error::domain(e.to_string()))?;
    let width = (n.max(2) - 1).to_string().len().max(6);

    let records = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeding::rng(seed, &[seeding::TAG_SYNTH, i as u64]);
            let tech_field = TechField::ALL[fields.sample(&mut rng)];
            let ownership = if rng.random::<f64>() < spec.foreign_share {
                Ownership::ForeignSubsidiary
            } else {
                Ownership::Domestic
            };
            let covariates = CovariateVector {
                family_size: spec.family_size.sample(&mut rng),
                inventor_size: spec.inventor_size.sample(&mut rng),
                grant_lag: spec.grant_lag.sample(&mut rng),
                tech_scope: spec.tech_scope.sample(&mut rng),
                tech_field,
                ownership,
            };
            let index = model::linear_index(&true_params.beta, &config.transforms.apply(&covariates));
            let log_r0 = index + noise.sample(&mut rng);
            PatentRecord {
                patent_id: format!("SYN{i:0width$}"),
                application_year: rng.random_range(spec.first_year..=spec.last_year),
                expiry_age: table.classify(log_r0),
                covariates,
                tech_field_raw: tech_field.label().to_string(),
                ownership_raw: ownership.label().to_string(),
            }
        })
        .collect();
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

impl VariableSummary {
    fn of(name: &str, values: &[f64]) -> Self {
        Self {
            name: name.to_string(),
            mean: stats::mean(values),
            sd: stats::sample_sd(values),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub field: TechField,
    pub obs: usize,
    /// Technology scope, inventor size, family size, renewal years, grant lag.
    pub variables: Vec<VariableSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub row: String,
    pub column: String,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub by_field: Vec<FieldSummary>,
    pub overall: FieldSummaryAll,
    pub mean_expiry_age: f64,
    pub correlations: Vec<Correlation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummaryAll {
    pub obs: usize,
    pub variables: Vec<VariableSummary>,
}

pub const SUMMARY_VARIABLES: [&str; 5] = [
    "Technology scope",
    "Inventor Size",
    "Family Size",
    "Renewal Years",
    "Grant lag",
];

fn variable_columns(records: &[&PatentRecord]) -> [Vec<f64>; 5] {
    let col = |f: fn(&PatentRecord) -> f64| records.iter().map(|r| f(r)).collect::<Vec<_>>();
    [
        col(|r| r.covariates.tech_scope),
        col(|r| r.covariates.inventor_size),
        col(|r| r.covariates.family_size),
        col(|r| f64::from(r.expiry_age)),
        col(|r| r.covariates.grant_lag),
    ]
}

/// Per-technology summary statistics and pairwise covariate correlations.
pub fn descriptive_stats(records: &[PatentRecord]) -> Result<DescriptiveStats> {
    if records.is_empty() {
        return Err(Error::domain("descriptive statistics of an empty record list"));
    }
    let mut groups: BTreeMap<TechField, Vec<&PatentRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.covariates.tech_field).or_default().push(r);
    }
    let summarize = |rs: &[&PatentRecord]| -> Vec<VariableSummary> {
        variable_columns(rs)
            .iter()
            .zip(SUMMARY_VARIABLES)
            .map(|(v, name)| VariableSummary::of(name, v))
            .collect()
    };
    let by_field = TechField::ALL
        .iter()
        .filter_map(|f| groups.get(f).map(|rs| (f, rs)))
        .map(|(&field, rs)| FieldSummary {
            field,
            obs: rs.len(),
            variables: summarize(rs),
        })
        .collect();
    let all: Vec<&PatentRecord> = records.iter().collect();
    let cols = variable_columns(&all);
    // Lower triangle in the order grant lag, family size, inventor size, technology scope.
    let named = [
        ("Grant Lag", &cols[4]),
        ("Family size", &cols[2]),
        ("Inventor Size", &cols[1]),
        ("Technology scope", &cols[0]),
    ];
    let mut correlations = Vec::new();
    for i in 1..named.len() {
        for j in 0..i {
            correlations.push(Correlation {
                row: named[i].0.to_string(),
                column: named[j].0.to_string(),
                r: stats::pearson(named[i].1, named[j].1),
            });
        }
    }
    Ok(DescriptiveStats {
        by_field,
        overall: FieldSummaryAll {
            obs: records.len(),
            variables: summarize(&all),
        },
        mean_expiry_age: stats::mean(&cols[3]),
        correlations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fee_schedule::builtin_schedule;

    const HEADER: &str =
        "patent_id,application_year,expiry_age,family_size,inventor_count,grant_lag_years,tech_scope,tech_field,ownership,censored";

    #[test]
    fn three_valid_rows() {
        let text = format!(
            "{HEADER}\nP1,1999,2,0,1,5,1,chemical,domestic,false\n\
             P2,2000,12,3,2,7,1,electrical,foreign_subsidiary,false\n\
             P3,2001,20,10,4,6,2,others,domestic,false\n"
        );
        let (recs, rep) = parse_records(&text).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(rep.rejected.is_empty());
        assert_eq!(rep.total_rows(), 3);
        assert_eq!(recs[1].covariates.tech_field, TechField::Electrical);
    }

    #[test]
    fn out_of_range_age_and_censored_rows() {
        let text = format!(
            "{HEADER}\nP1,1999,25,0,1,5,1,chemical,domestic,false\n\
             P2,2000,12,3,2,7,1,electrical,domestic,true\n\
             P3,2000,12,3,2,7,1,electrical,domestic,false\n"
        );
        let (recs, rep) = parse_records(&text).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(rep.rejected.len(), 2);
        assert!(rep.rejected[0].reason.contains("expiry_age"));
        assert_eq!(rep.warnings.len(), 1);
        assert_eq!(rep.total_rows(), 3);
    }

    #[test]
    fn row_errors_never_abort() {
        let text = format!(
            "{HEADER}\nP1,1999,5,x,1,5,1,chemical,domestic,false\n\
             P1,1999,5,1,1,5,1,chemical,domestic,false\n\
             P1,1999,5,1,1,5,1,chemical,domestic,false\n\
             P4,1999,5,1,0,5,1,chemical,domestic,false\n\
             P5,1999,5,1,1,5,1,biology,domestic,false\n\
             P6,1999,5,,1,5,1,chemical,domestic,false\n"
        );
        let (recs, rep) = parse_records(&text).unwrap();
        assert_eq!(recs.len(), 1);
        let reasons: Vec<&str> = rep.rejected.iter().map(|r| r.reason.as_str()).collect();
        assert!(reasons[0].contains("not a number"));
        assert!(reasons[1].contains("duplicate"));
        assert!(reasons[2].contains("inventor_count"));
        assert!(reasons[3].contains("tech_field"));
        assert!(reasons[4].contains("missing value"));
    }

    #[test]
    fn missing_column_is_fatal_and_named() {
        let text = "patent_id,application_year,expiry_age\nP1,1999,2\n";
        let err = parse_records(text).unwrap_err().to_string();
        assert!(err.contains("family_size") && err.contains("censored"), "{err}");
    }

    #[test]
    fn ipc_prefix_map_resolves_raw_codes() {
        let map = IpcPrefixMap::parse("A61K = chemical\nA61 = instruments\nH04 = electrical").unwrap();
        assert_eq!(map.lookup("A61K 31/545"), Some(TechField::Chemical));
        assert_eq!(map.lookup("a61b"), Some(TechField::Instruments));
        assert_eq!(map.lookup("F16"), None);
        let text = format!("{HEADER}\nP1,1999,5,1,1,5,1,A61K 31/545,domestic,false\n");
        let opts = IngestOptions {
            ipc_prefix_map: Some(map),
        };
        let (recs, _) = parse_records_with(&text, &opts).unwrap();
        assert_eq!(recs[0].covariates.tech_field, TechField::Chemical);
        assert_eq!(recs[0].tech_field_raw, "A61K 31/545");
    }

    #[test]
    fn degenerate_synthetic_cohorts() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let spec = CovariateSpec::default();
        let mut p = ModelParams::published_india();
        p.sigma = 1e-9;
        p.beta = Default::default();
        p.beta.intercept = -50.0;
        let low = generate_synthetic(&p, 200, &india, &cfg, &spec, 1).unwrap();
        assert!(low.iter().all(|r| r.expiry_age == 2));
        p.beta.intercept = 80.0;
        let high = generate_synthetic(&p, 200, &india, &cfg, &spec, 1).unwrap();
        assert!(high.iter().all(|r| r.expiry_age == 20));
        assert!(generate_synthetic(&p, 0, &india, &cfg, &spec, 1).is_err());
    }

    #[test]
    fn descriptive_stats_small_cases() {
        let text = format!(
            "{HEADER}\nP1,1999,4,1,1,5,1,chemical,domestic,false\n\
             P2,1999,8,3,1,5,1,chemical,domestic,false\n"
        );
        let (recs, _) = parse_records(&text).unwrap();
        let one = descriptive_stats(&recs[..1]).unwrap();
        let fam = &one.by_field[0].variables[2];
        assert_eq!((fam.mean, fam.sd), (1.0, 0.0));
        let two = descriptive_stats(&recs).unwrap();
        let fam = &two.by_field[0].variables[2];
        assert_eq!(fam.mean, 2.0);
        assert!((fam.sd - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(two.mean_expiry_age, 6.0);
        assert_eq!(two.correlations.len(), 6);
        assert!(descriptive_stats(&[]).is_err());
    }
}
