//! Expiry-age distribution and the sample log-likelihood.
//!
//! The renewal rule turns the fee ladder into known cutpoints on log r(0), so
//! the expiry age is an ordered-probit outcome with fixed thresholds: the
//! patent expires at age T when log r(0) falls between the thresholds of ages
//! T − 1 and T.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::PatentRecord;
use crate::error::{Error, Result};
use crate::fee_schedule::FeeSchedule;
use crate::model::{self, CovariateVector, LeadingZeroFees, ModelConfig, ModelParams};
use crate::normal;
use crate::stats::pairwise_sum;

/// Floor applied inside the log so hopeless parameter regions stay finite.
pub const PROB_FLOOR: f64 = 1e-300;

/// log(c_t / z_t) at each decision age for one (schedule, d, s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    pub ages: Vec<u32>,
    pub values: Vec<f64>,
    /// Set when some threshold decreases with age.
    pub non_monotone: bool,
    min_age: u32,
    max_term: u32,
}

impl ThresholdTable {
    pub fn build(schedule: &FeeSchedule, d: f64, config: &ModelConfig) -> Result<Self> {
        config.validate()?;
        if config.max_term > schedule.max_term() {
            return Err(Error::config(format!(
                "model term {} exceeds schedule `{}` term {}",
                config.max_term,
                schedule.name(),
                schedule.max_term()
            )));
        }
        let ages: Vec<u32> = config.decision_ages().collect();
        let first_fee = ages
            .iter()
            .copied()
            .find(|&t| schedule.cost_at(t).is_ok_and(|c| c > 0.0));
        let mut values = Vec::with_capacity(ages.len());
        for &t in &ages {
            let th = match (config.leading_zero_fees, first_fee) {
                (LeadingZeroFees::FirstFeeAge, Some(f)) if t < f => model::threshold(schedule, d, config, f)?,
                _ => model::threshold(schedule, d, config, t)?,
            };
            values.push(th);
        }
        let non_monotone = values.windows(2).any(|w| w[1] < w[0]);
        Ok(Self {
            ages,
            values,
            non_monotone,
            min_age: config.min_age,
            max_term: config.max_term,
        })
    }

    fn at(&self, age: u32) -> f64 {
        self.values[(age - self.min_age) as usize]
    }

    /// Bounds on log r(0) implied by expiry at age `expiry`.
    pub fn log_r0_bounds(&self, expiry: u32) -> Result<(f64, f64)> {
        if expiry < self.min_age || expiry > self.max_term {
            return Err(Error::domain(format!(
                "expiry age {expiry} outside [{}, {}]",
                self.min_age, self.max_term
            )));
        }
        let lower = if expiry == self.min_age {
            f64::NEG_INFINITY
        } else {
            self.at(expiry - 1)
        };
        let upper = if expiry == self.max_term {
            f64::INFINITY
        } else {
            self.at(expiry)
        };
        Ok((lower, upper))
    }

    /// Expiry age implied by a log initial return: the first decision age
    /// whose threshold exceeds it, `max_term` if none does.
    pub fn classify(&self, log_r0: f64) -> u32 {
        match self.values.iter().position(|&th| th > log_r0) {
            Some(0) => self.min_age,
            Some(i) => self.ages[i],
            None => self.max_term,
        }
    }
}

/// Probability of landing in [lower, upper] for log r(0) ~ N(index, σ²).
/// Inverted intervals (non-monotone thresholds) give negative mass so the
/// expiry probabilities still telescope to one.
fn signed_mass(lower: f64, upper: f64, index: f64, sigma: f64) -> f64 {
    let a = (lower - index) / sigma;
    let b = (upper - index) / sigma;
    if a <= b {
        normal::interval_mass(a, b)
    } else {
        -normal::interval_mass(b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpiryPmf {
    pub ages: Vec<u32>,
    pub probs: Vec<f64>,
    /// Model-validity warning: thresholds decrease somewhere, so some entries
    /// may be negative. Returned as computed, never clipped.
    pub non_monotone: bool,
}

impl ExpiryPmf {
    pub fn prob(&self, expiry: u32) -> Option<f64> {
        let first = *self.ages.first()?;
        self.probs.get(expiry.checked_sub(first)? as usize).copied()
    }
}

pub fn expiry_pmf(
    params: &ModelParams,
    x: &CovariateVector,
    schedule: &FeeSchedule,
    config: &ModelConfig,
) -> Result<ExpiryPmf> {
    params.validate()?;
    let table = ThresholdTable::build(schedule, params.d, config)?;
    Ok(pmf_from_table(params, x, &table, config))
}

pub(crate) fn pmf_from_table(
    params: &ModelParams,
    x: &CovariateVector,
    table: &ThresholdTable,
    config: &ModelConfig,
) -> ExpiryPmf {
    let index = model::linear_index(&params.beta, &config.transforms.apply(x));
    let ages: Vec<u32> = config.expiry_ages().collect();
    let probs = ages
        .iter()
        .map(|&t| {
            let (lo, hi) = table.log_r0_bounds(t).expect("age from config range");
            signed_mass(lo, hi, index, params.sigma)
        })
        .collect();
    ExpiryPmf {
        ages,
        probs,
        non_monotone: table.non_monotone,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLikelihood {
    pub value: f64,
    pub non_monotone: bool,
}

/// Σ_i log max(P[T = T_i], 1e−300).
pub fn log_likelihood(
    params: &ModelParams,
    records: &[PatentRecord],
    schedule: &FeeSchedule,
    config: &ModelConfig,
) -> Result<LogLikelihood> {
    let eval = LikelihoodEvaluator::new(records, schedule, config)?;
    eval.evaluate(params, true)
}

/// Precompiled records for repeated likelihood evaluation, with threshold
/// tables cached per depreciation rate.
pub struct LikelihoodEvaluator<'a> {
    schedule: &'a FeeSchedule,
    config: &'a ModelConfig,
    // Per-record covariates after transforms, laid out for the index:
    // [family, inventors, lag, scope] and the field slot (0..4, or 4 = others).
    numeric: Vec<[f64; 4]>,
    field: Vec<usize>,
    expiry: Vec<u32>,
    cache: RwLock<HashMap<u64, Arc<ThresholdTable>>>,
}

const CACHE_LIMIT: usize = 1 << 16;

impl<'a> LikelihoodEvaluator<'a> {
    pub fn new(records: &[PatentRecord], schedule: &'a FeeSchedule, config: &'a ModelConfig) -> Result<Self> {
        config.validate()?;
        if records.is_empty() {
            return Err(Error::domain("log-likelihood of an empty record list"));
        }
        let mut numeric = Vec::with_capacity(records.len());
        let mut field = Vec::with_capacity(records.len());
        let mut expiry = Vec::with_capacity(records.len());
        for r in records {
            if !config.expiry_ages().contains(&r.expiry_age) {
                return Err(Error::domain(format!(
                    "patent `{}` has expiry age {} outside [{}, {}]",
                    r.patent_id, r.expiry_age, config.min_age, config.max_term
                )));
            }
            let x = config.transforms.apply(&r.covariates);
            numeric.push([x.family_size, x.inventor_size, x.grant_lag, x.tech_scope]);
            field.push(field_slot(x.tech_field));
            expiry.push(r.expiry_age);
        }
        Ok(Self {
            schedule,
            config,
            numeric,
            field,
            expiry,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn len(&self) -> usize {
        self.expiry.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expiry.is_empty()
    }

    /// Threshold table for `d`, computed at `d` rounded to 12 significant
    /// digits so cached entries do not depend on which caller arrived first.
    pub fn thresholds(&self, d: f64) -> Result<Arc<ThresholdTable>> {
        let canonical = round_sig12(d);
        let key = canonical.to_bits();
        if let Some(t) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(ThresholdTable::build(self.schedule, canonical, self.config)?);
        let mut cache = self.cache.write().expect("cache lock");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&table));
        Ok(table)
    }

    /// Per-record log-probability terms in record order.
    pub fn terms(&self, params: &ModelParams, parallel: bool) -> Result<(Vec<f64>, bool)> {
        params.validate()?;
        let table = self.thresholds(params.d)?;
        let b = &params.beta;
        let fields = [b.chemical, b.mechanical, b.electrical, b.instruments, 0.0];
        let coef = [b.family_size, b.inventor_size, b.grant_lag, b.tech_scope];
        let term = |i: usize| {
            let x = &self.numeric[i];
            let index = b.intercept
                + fields[self.field[i]]
                + coef[0] * x[0]
                + coef[1] * x[1]
                + coef[2] * x[2]
                + coef[3] * x[3];
            let (lo, hi) = table.log_r0_bounds(self.expiry[i]).expect("validated at construction");
            signed_mass(lo, hi, index, params.sigma).max(PROB_FLOOR).ln()
        };
        let terms = if parallel {
            (0..self.len()).into_par_iter().map(term).collect()
        } else {
            (0..self.len()).map(term).collect()
        };
        Ok((terms, table.non_monotone))
    }

    /// Sum of the per-record terms with a fixed pairwise reduction, so the
    /// value is bitwise identical for any worker count.
    pub fn evaluate(&self, params: &ModelParams, parallel: bool) -> Result<LogLikelihood> {
        let (terms, non_monotone) = self.terms(params, parallel)?;
        Ok(LogLikelihood {
            value: pairwise_sum(&terms),
            non_monotone,
        })
    }
}

fn field_slot(f: model::TechField) -> usize {
    use model::TechField::*;
    match f {
        Chemical => 0,
        Mechanical => 1,
        Electrical => 2,
        Instruments => 3,
        Others => 4,
    }
}

fn round_sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fee_schedule::{builtin_schedule, FeeEntry};
    use crate::model::{Ownership, TechField};

    fn mean_x() -> CovariateVector {
        CovariateVector {
            family_size: 2.99,
            inventor_size: 2.45,
            grant_lag: 7.25,
            tech_scope: 1.06,
            tech_field: TechField::Chemical,
            ownership: Ownership::Domestic,
        }
    }

    #[test]
    fn centered_never_renewed_is_one_half() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let mut p = ModelParams::published_india();
        let th = ThresholdTable::build(&india, p.d, &cfg).unwrap();
        let x = mean_x();
        // Shift the intercept so βX sits exactly on the first cutpoint.
        p.beta.intercept += th.values[0] - model::linear_index(&p.beta, &x);
        for sigma in [0.1, 1.0, 6.07] {
            p.sigma = sigma;
            let pmf = expiry_pmf(&p, &x, &india, &cfg).unwrap();
            assert!((pmf.prob(2).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn india_age_three_is_unreachable_by_default() {
        let india = builtin_schedule("india").unwrap();
        let pmf = expiry_pmf(&ModelParams::published_india(), &mean_x(), &india, &ModelConfig::default()).unwrap();
        assert_eq!(pmf.prob(3), Some(0.0));
        assert_eq!(pmf.probs.len(), 19);
        let cfg = ModelConfig {
            leading_zero_fees: LeadingZeroFees::Reject,
            ..ModelConfig::default()
        };
        assert!(matches!(
            expiry_pmf(&ModelParams::published_india(), &mean_x(), &india, &cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn sigma_must_be_positive() {
        let india = builtin_schedule("india").unwrap();
        let mut p = ModelParams::published_india();
        p.sigma = 0.0;
        assert!(matches!(
            expiry_pmf(&p, &mean_x(), &india, &ModelConfig::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn decreasing_fees_flag_negative_mass() {
        let s = FeeSchedule::new(
            "odd",
            "USD",
            vec![
                FeeEntry {
                    age_from: 1,
                    age_to: 10,
                    annual_cost: 5000.0,
                },
                FeeEntry {
                    age_from: 11,
                    age_to: 20,
                    annual_cost: 1.0,
                },
            ],
            20,
        )
        .unwrap();
        let mut p = ModelParams::published_india();
        p.sigma = 1.0;
        p.beta = Default::default();
        p.beta.intercept = 9.0;
        let pmf = expiry_pmf(&p, &mean_x(), &s, &ModelConfig::default()).unwrap();
        assert!(pmf.non_monotone);
        assert!(pmf.probs.iter().any(|&q| q < 0.0));
        assert!((pmf.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn us_schedule_has_undefined_late_thresholds() {
        let us = builtin_schedule("us").unwrap();
        assert!(matches!(
            ThresholdTable::build(&us, 0.3, &ModelConfig::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn classify_inverts_bounds() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let table = ThresholdTable::build(&india, 0.3, &cfg).unwrap();
        for t in cfg.expiry_ages().filter(|&t| t != 3) {
            let (lo, hi) = table.log_r0_bounds(t).unwrap();
            let inside = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => 0.5 * (lo + hi),
                (false, true) => hi - 1.0,
                (true, false) => lo + 1.0,
                _ => unreachable!(),
            };
            assert_eq!(table.classify(inside), t);
        }
    }

    #[test]
    fn cache_key_is_canonical() {
        assert_eq!(round_sig12(0.300_000_000_000_01), 0.3);
        assert_eq!(round_sig12(0.123_456_789_012_9), 0.123_456_789_013);
    }
}
