//! Age-indexed renewal fee schedules.
//!
//! A schedule is a sorted list of disjoint age ranges, each carrying an annual
//! cost. Ages outside every range cost nothing, so `cost_at` is total over
//! `1..=max_term`.
//!
//! The text form is one `key = value` pair per line:
//!
//! ```text
//! name = "india"
//! currency = "USD"
//! max_term = 20
//! entry = { from = 3, to = 6, cost = 54.81 }
//! entry = { from = 7, to = 10, cost = 164.43 }
//! ```
//!
//! `entry` may repeat; `#` starts a comment line.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_TERM: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeeEntry {
    pub age_from: u32,
    pub age_to: u32,
    pub annual_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeeSchedule {
    name: String,
    currency: String,
    entries: Vec<FeeEntry>,
    max_term: u32,
}

impl FeeSchedule {
    /// Validate and build a schedule. All violations are reported together.
    pub fn new(
        name: impl Into<String>,
        currency: impl Into<String>,
        entries: Vec<FeeEntry>,
        max_term: u32,
    ) -> Result<Self> {
        let name = name.into();
        let currency = currency.into();
        let mut problems = Vec::new();
        if name.trim().is_empty() {
            problems.push("name is empty".to_string());
        }
        if currency.len() != 3 || !currency.chars().all(|c| c.is_ascii_uppercase()) {
            problems.push(format!("currency `{currency}` is not a three-letter ISO-4217 code"));
        }
        if max_term < 1 {
            problems.push("max_term must be at least 1".to_string());
        }
        for (i, e) in entries.iter().enumerate() {
            if e.age_from > e.age_to {
                problems.push(format!(
                    "entry {}: descending range {}–{}",
                    i + 1,
                    e.age_from,
                    e.age_to
                ));
            }
            if e.age_from < 1 || e.age_to > max_term {
                problems.push(format!(
                    "entry {}: range {}–{} outside [1, {max_term}]",
                    i + 1,
                    e.age_from,
                    e.age_to
                ));
            }
            if !(e.annual_cost >= 0.0) || !e.annual_cost.is_finite() {
                problems.push(format!("entry {}: negative or non-finite cost {}", i + 1, e.annual_cost));
            }
        }
        for (i, pair) in entries.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            if b.age_from <= a.age_to {
                if b.age_to >= a.age_from {
                    problems.push(format!(
                        "entries {} and {}: ranges {}–{} and {}–{} overlap",
                        i + 1,
                        i + 2,
                        a.age_from,
                        a.age_to,
                        b.age_from,
                        b.age_to
                    ));
                } else {
                    problems.push(format!("entries {} and {}: ranges not in ascending order", i + 1, i + 2));
                }
            }
        }
        if !problems.is_empty() {
            return Err(Error::Schedule(problems));
        }
        Ok(Self {
            name,
            currency,
            entries,
            max_term,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn currency(&self) -> &str {
        &self.currency
    }

    pub fn entries(&self) -> &[FeeEntry] {
        &self.entries
    }

    pub fn max_term(&self) -> u32 {
        self.max_term
    }

    /// Annual cost due at `age`; 0 where no entry covers the age.
    pub fn cost_at(&self, age: u32) -> Result<f64> {
        if age < 1 || age > self.max_term {
            return Err(Error::domain(format!(
                "age {age} outside [1, {}] for schedule `{}`",
                self.max_term, self.name
            )));
        }
        Ok(self
            .entries
            .iter()
            .find(|e| e.age_from <= age && age <= e.age_to)
            .map_or(0.0, |e| e.annual_cost))
    }

    /// First age carrying a strictly positive fee.
    pub fn first_fee_age(&self) -> Option<u32> {
        self.entries
            .iter()
            .find(|e| e.annual_cost > 0.0)
            .map(|e| e.age_from)
    }

    /// Whether the cost never decreases across covered ages.
    pub fn is_nondecreasing(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[1].annual_cost >= w[0].annual_cost)
    }

    /// Render the schedule in its key-value text form.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", quote(&self.name));
        let _ = writeln!(out, "currency = {}", quote(&self.currency));
        let _ = writeln!(out, "max_term = {}", self.max_term);
        for e in &self.entries {
            let _ = writeln!(
                out,
                "entry = {{ from = {}, to = {}, cost = {:?} }}",
                e.age_from, e.age_to, e.annual_cost
            );
        }
        out
    }
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Parse and validate a schedule document.
pub fn load_schedule(config_text: &str) -> Result<FeeSchedule> {
    let mut problems = Vec::new();
    let mut name = None;
    let mut currency = None;
    let mut max_term = None;
    let mut entries = Vec::new();

    for (lineno, raw) in config_text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = lineno + 1;
        let Some((key, value)) = line.split_once('=') else {
            problems.push(format!("line {lineno}: expected `key = value`"));
            continue;
        };
        let key = key.trim();
        let value = match parse_value(value.trim()) {
            Ok(v) => v,
            Err(e) => {
                problems.push(format!("line {lineno}: {e}"));
                continue;
            }
        };
        match key {
            "name" => match value.as_str() {
                Some(s) => name = Some(s.to_string()),
                None => problems.push(format!("line {lineno}: `name` must be a string")),
            },
            "currency" => match value.as_str() {
                Some(s) => currency = Some(s.to_string()),
                None => problems.push(format!("line {lineno}: `currency` must be a string")),
            },
            "max_term" => match value.as_integer().and_then(|v| u32::try_from(v).ok()) {
                Some(v) => max_term = Some(v),
                None => problems.push(format!("line {lineno}: `max_term` must be a positive integer")),
            },
            "entry" => match parse_entry(&value) {
                Ok(e) => entries.push(e),
                Err(e) => problems.push(format!("line {lineno}: {e}")),
            },
            other => problems.push(format!("line {lineno}: unknown key `{other}`")),
        }
    }
    if name.is_none() {
        problems.push("missing `name`".to_string());
    }
    if currency.is_none() {
        problems.push("missing `currency`".to_string());
    }
    if max_term.is_none() {
        problems.push("missing `max_term`".to_string());
    }
    if entries.is_empty() {
        problems.push("no `entry` lines".to_string());
    }
    if !problems.is_empty() {
        // Structural problems first; still run the invariant checks when the
        // header parsed so the caller sees every violation.
        if let (Some(n), Some(c), Some(m)) = (&name, &currency, max_term) {
            if let Err(Error::Schedule(more)) = FeeSchedule::new(n.clone(), c.clone(), entries, m) {
                problems.extend(more);
            }
        }
        return Err(Error::Schedule(problems));
    }
    FeeSchedule::new(name.unwrap(), currency.unwrap(), entries, max_term.unwrap())
}

fn parse_value(text: &str) -> std::result::Result<toml::Value, String> {
    let doc: toml::Table = format!("v = {text}")
        .parse()
        .map_err(|e: toml::de::Error| format!("malformed value `{text}`: {}", e.message()))?;
    Ok(doc.get("v").cloned().expect("key inserted above"))
}

fn parse_entry(value: &toml::Value) -> std::result::Result<FeeEntry, String> {
    let table = value
        .as_table()
        .ok_or_else(|| "`entry` must be an inline table { from, to, cost }".to_string())?;
    let age = |k: &str| -> std::result::Result<u32, String> {
        table
            .get(k)
            .and_then(toml::Value::as_integer)
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| format!("entry field `{k}` must be a nonnegative integer"))
    };
    let cost = table
        .get("cost")
        .and_then(|v| v.as_float().or_else(|| v.as_integer().map(|i| i as f64)))
        .ok_or_else(|| "entry field `cost` must be a number".to_string())?;
    if let Some(extra) = table.keys().find(|k| !matches!(k.as_str(), "from" | "to" | "cost")) {
        return Err(format!("unknown entry field `{extra}`"));
    }
    Ok(FeeEntry {
        age_from: age("from")?,
        age_to: age("to")?,
        annual_cost: cost,
    })
}

/// Built-in schedules, in US dollars, as published for India, China and the US.
pub fn builtin_schedule(country: &str) -> Result<FeeSchedule> {
    let e = |age_from, age_to, annual_cost| FeeEntry {
        age_from,
        age_to,
        annual_cost,
    };
    let (name, entries) = match country.to_ascii_lowercase().as_str() {
        "india" => (
            "india",
            vec![
                e(3, 6, 54.81),
                e(7, 10, 164.43),
                e(11, 15, 328.86),
                e(16, 20, 548.10),
            ],
        ),
        "china" => (
            "china",
            vec![
                e(1, 3, 135.0),
                e(4, 6, 180.0),
                e(7, 9, 300.0),
                e(10, 12, 600.0),
                e(13, 15, 900.0),
                e(16, 20, 1200.0),
            ],
        ),
        // Annualized at the listed ages; lump-sum timing is not modeled.
        "us" => ("us", vec![e(4, 7, 1600.0), e(8, 11, 3600.0), e(12, 14, 7400.0)]),
        other => {
            return Err(Error::domain(format!(
                "unknown built-in schedule `{other}` (expected india, china or us)"
            )))
        }
    };
    FeeSchedule::new(name, "USD", entries, DEFAULT_MAX_TERM)
}

pub const BUILTIN_NAMES: [&str; 3] = ["india", "china", "us"];
