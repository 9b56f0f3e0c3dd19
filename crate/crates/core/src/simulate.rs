//! Per-patent value simulation.
//!
//! Given parameters and a patent's observed expiry age, the error term of its
//! log initial return is confined to the interval the renewal rule implies.
//! Draws from the normal law restricted to that interval give the simulated
//! initial return r(0) = exp(β·X + ε); the lifetime value follows by summing
//! depreciated returns net of fees. Running the same simulation under every
//! elite parameter vector yields an uncertainty band.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::PatentRecord;
use crate::error::{Error, Result};
use crate::fee_schedule::FeeSchedule;
use crate::likelihood::ThresholdTable;
use crate::model::{self, CovariateVector, ModelConfig, ModelParams, NpvConvention};
use crate::normal;
use crate::seeding;
use crate::stats;

/// Bounds on the error term ε implied by an observed renewal history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonInterval {
    pub lower: f64,
    pub upper: f64,
}

impl EpsilonInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::ModelValidity(format!("inverted interval [{lower}, {upper}]")));
        }
        if !lower.is_finite() && !upper.is_finite() && lower == upper {
            return Err(Error::ModelValidity("interval collapsed at infinity".into()));
        }
        Ok(Self { lower, upper })
    }

    pub fn unbounded() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn contains(&self, e: f64) -> bool {
        self.lower <= e && e <= self.upper
    }
}

pub fn epsilon_bounds(
    params: &ModelParams,
    x: &CovariateVector,
    expiry: u32,
    schedule: &FeeSchedule,
    config: &ModelConfig,
) -> Result<EpsilonInterval> {
    params.validate()?;
    let table = ThresholdTable::build(schedule, params.d, config)?;
    interval_from_table(params, x, expiry, &table, config)
}

fn interval_from_table(
    params: &ModelParams,
    x: &CovariateVector,
    expiry: u32,
    table: &ThresholdTable,
    config: &ModelConfig,
) -> Result<EpsilonInterval> {
    let index = model::linear_index(&params.beta, &config.transforms.apply(x));
    let (lo, hi) = table.log_r0_bounds(expiry)?;
    EpsilonInterval::new(lo - index, hi - index)
}

// Beyond this many standard deviations the inverse-CDF path risks underflow;
// Marsaglia's exact tail method takes over.
const TAIL_CUTOFF: f64 = 35.0;

/// N(0, σ²) conditioned on an interval.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedNormal {
    sigma: f64,
    a: f64,
    b: f64,
    method: Method,
}

#[derive(Debug, Clone, Copy)]
enum Method {
    /// Both endpoints at or above zero: invert the survival function.
    Upper { qa: f64, qb: f64 },
    /// Both endpoints at or below zero: invert the CDF.
    Lower { pa: f64, pb: f64 },
    /// Straddles zero: invert whichever tail the target falls in.
    Central { left: f64, right: f64, mass: f64 },
    /// Far upper tail (mirrored when `negate`).
    Tail { a: f64, b: f64, negate: bool },
}

impl TruncatedNormal {
    pub fn new(sigma: f64, interval: EpsilonInterval) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma = {sigma} must be > 0")));
        }
        let a = interval.lower / sigma;
        let b = interval.upper / sigma;
        let zero_mass = || Error::Sampling {
            lower: interval.lower,
            upper: interval.upper,
            sigma,
        };
        if !(b > a) {
            return Err(zero_mass());
        }
        let method = if a >= TAIL_CUTOFF {
            Method::Tail { a, b, negate: false }
        } else if b <= -TAIL_CUTOFF {
            Method::Tail {
                a: -b,
                b: -a,
                negate: true,
            }
        } else if a >= 0.0 {
            Method::Upper { qa: normal::sf(a), qb: normal::sf(b) }
        } else if b <= 0.0 {
            Method::Lower {
                pa: normal::cdf(a),
                pb: normal::cdf(b),
            }
        } else {
            let left = normal::cdf(a);
            let right = normal::sf(b);
            Method::Central {
                left,
                right,
                mass: normal::interval_mass(a, b),
            }
        };
        let mass_ok = match method {
            Method::Upper { qa, qb } => qa > qb,
            Method::Lower { pa, pb } => pb > pa,
            Method::Central { mass, .. } => mass > 0.0,
            Method::Tail { .. } => true,
        };
        if !mass_ok {
            return Err(zero_mass());
        }
        Ok(Self { sigma, a, b, method })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let z = match self.method {
            Method::Upper { qa, qb } => normal::isf(qb + (1.0 - u) * (qa - qb)),
            Method::Lower { pa, pb } => normal::quantile(pa + u * (pb - pa)),
            Method::Central { left, right, mass } => {
                let p = left + u * mass;
                if p <= 0.5 {
                    normal::quantile(p)
                } else {
                    normal::isf(right + (1.0 - u) * mass)
                }
            }
            Method::Tail { a, b, negate } => {
                let z = marsaglia_tail(a, b, rng);
                if negate {
                    -z
                } else {
                    z
                }
            }
        };
        self.sigma * z.clamp(self.a, self.b)
    }
}

// Exact draw from the standard normal restricted to [a, b], a > 0 large:
// propose from the density ∝ x φ(x) on [a, b] and accept with probability a/x.
fn marsaglia_tail<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let span = 0.5 * (b - a) * (b + a);
    loop {
        let u: f64 = rng.random();
        let e = -(u * (-span).exp_m1()).ln_1p();
        let x = (a * a + 2.0 * e).sqrt();
        let v: f64 = rng.random();
        if v * x <= a {
            return x;
        }
    }
}

/// `n` independent draws from N(0, σ²) conditioned on `interval`.
pub fn sample_truncated_normal(sigma: f64, interval: EpsilonInterval, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::domain("need at least one draw"));
    }
    let dist = TruncatedNormal::new(sigma, interval)?;
    let mut rng = seeding::rng(seed, &[seeding::TAG_SIM]);
    Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
}

/// Lifetime value of a patent expiring at age `expiry`:
/// Σ_{t=1}^{T} (r(0) e^{−dt} − c_t)(1+s)^{−t}, or with only fees discounted
/// under [`NpvConvention::CostsOnly`].
pub fn net_present_value(r0: f64, d: f64, schedule: &FeeSchedule, config: &ModelConfig, expiry: u32) -> Result<f64> {
    let mut total = 0.0;
    for t in 1..=expiry {
        total += npv_term(r0, d, schedule, config, t)?;
    }
    Ok(total)
}

fn npv_term(r0: f64, d: f64, schedule: &FeeSchedule, config: &ModelConfig, t: u32) -> Result<f64> {
    let tf = f64::from(t);
    let ret = model::return_at_age(r0, d, tf);
    let cost = schedule.cost_at(t)?;
    let disc = (1.0 + config.discount_rate).powi(-(t as i32));
    Ok(match config.npv_convention {
        NpvConvention::NetFlow => (ret - cost) * disc,
        NpvConvention::CostsOnly => ret - cost * disc,
    })
}

/// V(1), V(2), …, V(expiry) accumulated one period at a time.
pub fn npv_path(r0: f64, d: f64, schedule: &FeeSchedule, config: &ModelConfig, expiry: u32) -> Result<Vec<f64>> {
    let mut path = Vec::with_capacity(expiry as usize);
    let mut v = 0.0;
    for t in 1..=expiry {
        v += npv_term(r0, d, schedule, config, t)?;
        path.push(v);
    }
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleStatistic {
    #[default]
    Mean,
    Median,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValueConfig {
    /// Monte Carlo draws per patent under the point estimate.
    pub draws: usize,
    /// Draws per patent per elite member in the ensemble.
    pub ensemble_draws: usize,
    /// Reported r(0) quantiles; capped at 0.99.
    pub quantiles: Vec<f64>,
    pub ensemble_statistic: EnsembleStatistic,
    /// Below this many draws the Monte Carlo standard error is flagged unreliable.
    pub min_reliable_draws: usize,
    /// Largest tolerated share of skipped elite members.
    pub max_skip_fraction: f64,
    pub seed: u64,
}

impl Default for ValueConfig {
    fn default() -> Self {
        Self {
            draws: 10_000,
            ensemble_draws: 1_000,
            quantiles: vec![0.01, 0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99],
            ensemble_statistic: EnsembleStatistic::Mean,
            min_reliable_draws: 100,
            max_skip_fraction: 0.10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    /// Mean (or median) over elite members of the per-member mean log r(0).
    pub log_r0: f64,
    /// Empirical 5%–95% interval over the elite realizations.
    pub band: (f64, f64),
    pub members_used: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueEstimate {
    pub patent_id: String,
    pub expiry_age: u32,
    pub r0_mean: f64,
    /// Monte Carlo standard error of `r0_mean`.
    pub r0_mean_se: f64,
    pub r0_median: f64,
    /// (probability, r(0) quantile), probabilities ascending.
    pub r0_quantiles: Vec<(f64, f64)>,
    pub log_r0_mean: f64,
    pub npv_mean: f64,
    pub npv_median: f64,
    pub draws_used: usize,
    pub mc_se_reliable: bool,
    pub ensemble: Option<EnsembleSummary>,
}

/// Simulator bound to one parameter vector; thresholds computed once.
pub struct ValueSimulator<'a> {
    params: ModelParams,
    table: ThresholdTable,
    schedule: &'a FeeSchedule,
    config: &'a ModelConfig,
}

impl<'a> ValueSimulator<'a> {
    pub fn new(params: &ModelParams, schedule: &'a FeeSchedule, config: &'a ModelConfig) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params: *params,
            table: ThresholdTable::build(schedule, params.d, config)?,
            schedule,
            config,
        })
    }

    pub fn interval(&self, record: &PatentRecord) -> Result<EpsilonInterval> {
        interval_from_table(&self.params, &record.covariates, record.expiry_age, &self.table, self.config)
    }

    fn index(&self, record: &PatentRecord) -> f64 {
        model::linear_index(&self.params.beta, &self.config.transforms.apply(&record.covariates))
    }

    /// Draws of log r(0) for one patent.
    pub fn log_r0_draws(&self, record: &PatentRecord, n: usize, seed: u64) -> Result<Vec<f64>> {
        let interval = self.interval(record)?;
        let index = self.index(record);
        let eps = sample_truncated_normal(self.params.sigma, interval, n, seed)?;
        Ok(eps.into_iter().map(|e| index + e).collect())
    }

    /// Mean of log r(0) over `n` draws.
    pub fn mean_log_r0(&self, record: &PatentRecord, n: usize, seed: u64) -> Result<f64> {
        Ok(stats::mean(&self.log_r0_draws(record, n, seed)?))
    }

    pub fn simulate(&self, record: &PatentRecord, value: &ValueConfig, seed: u64) -> Result<ValueEstimate> {
        let n = value.draws.max(1);
        let log_draws = self.log_r0_draws(record, n, seed)?;
        let r0: Vec<f64> = log_draws.iter().map(|l| l.exp()).collect();
        let sorted = stats::sorted_copy(&r0);
        let r0_mean = stats::mean(&r0);
        let r0_median = stats::quantile_sorted(&sorted, 0.5);
        let r0_mean_se = if n > 1 {
            stats::sample_sd(&r0) / (n as f64).sqrt()
        } else {
            f64::NAN
        };
        let mut probs: Vec<f64> = value.quantiles.iter().copied().filter(|p| (0.0..=0.99).contains(p)).collect();
        probs.sort_by(f64::total_cmp);
        probs.dedup();
        let r0_quantiles = probs.iter().map(|&p| (p, stats::quantile_sorted(&sorted, p))).collect();
        // The lifetime value is increasing and affine in r(0), so it maps the
        // mean and median of r(0) onto the mean and median of the value.
        let npv = |r: f64| net_present_value(r, self.params.d, self.schedule, self.config, record.expiry_age);
        Ok(ValueEstimate {
            patent_id: record.patent_id.clone(),
            expiry_age: record.expiry_age,
            r0_mean,
            r0_mean_se,
            r0_median,
            r0_quantiles,
            log_r0_mean: stats::mean(&log_draws),
            npv_mean: npv(r0_mean)?,
            npv_median: npv(r0_median)?,
            draws_used: n,
            mc_se_reliable: n >= value.min_reliable_draws.max(2),
            ensemble: None,
        })
    }
}

/// Ensemble of elite parameter vectors with thresholds precomputed per member.
pub struct Ensemble<'a> {
    members: Vec<Option<ValueSimulator<'a>>>,
}

impl<'a> Ensemble<'a> {
    /// Members whose thresholds cannot be built are kept as skipped slots.
    pub fn new(elite: &[ModelParams], schedule: &'a FeeSchedule, config: &'a ModelConfig) -> Result<Self> {
        if elite.is_empty() {
            return Err(Error::domain("empty elite set"));
        }
        Ok(Self {
            members: elite
                .iter()
                .map(|p| ValueSimulator::new(p, schedule, config).ok())
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn summarize(
        &self,
        record: &PatentRecord,
        n: usize,
        seed: u64,
        statistic: EnsembleStatistic,
        max_skip_fraction: f64,
    ) -> Result<EnsembleSummary> {
        let mut realizations = Vec::with_capacity(self.members.len());
        for (k, member) in self.members.iter().enumerate() {
            let member_seed = seeding::derive(seed, &[seeding::TAG_ENSEMBLE, k as u64]);
            if let Some(sim) = member {
                match sim.mean_log_r0(record, n.max(1), member_seed) {
                    Ok(v) => realizations.push(v),
                    Err(Error::ModelValidity(_) | Error::Sampling { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let total = self.members.len();
        let skipped = total - realizations.len();
        if realizations.is_empty() || skipped as f64 > max_skip_fraction * total as f64 {
            return Err(Error::Ensemble { skipped, total });
        }
        let sorted = stats::sorted_copy(&realizations);
        let log_r0 = match statistic {
            EnsembleStatistic::Mean => stats::mean(&realizations),
            EnsembleStatistic::Median => stats::quantile_sorted(&sorted, 0.5),
        };
        Ok(EnsembleSummary {
            log_r0,
            band: (stats::quantile_sorted(&sorted, 0.05), stats::quantile_sorted(&sorted, 0.95)),
            members_used: realizations.len(),
            skipped,
        })
    }
}

/// Ensemble fields for one patent under every elite parameter vector.
pub fn ensemble_value(
    elite: &[ModelParams],
    record: &PatentRecord,
    schedule: &FeeSchedule,
    config: &ModelConfig,
    n: usize,
    seed: u64,
) -> Result<EnsembleSummary> {
    Ensemble::new(elite, schedule, config)?.summarize(record, n, seed, EnsembleStatistic::Mean, 0.10)
}

/// Initial-return summary for one patent under a single parameter vector.
pub fn simulate_initial_return(
    params: &ModelParams,
    record: &PatentRecord,
    schedule: &FeeSchedule,
    config: &ModelConfig,
    n: usize,
    seed: u64,
) -> Result<ValueEstimate> {
    let value = ValueConfig {
        draws: n,
        ..ValueConfig::default()
    };
    ValueSimulator::new(params, schedule, config)?.simulate(record, &value, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueFailure {
    pub patent_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchValues {
    /// In input record order.
    pub estimates: Vec<ValueEstimate>,
    pub failures: Vec<ValueFailure>,
}

impl BatchValues {
    pub fn by_id(&self) -> BTreeMap<&str, &ValueEstimate> {
        self.estimates.iter().map(|e| (e.patent_id.as_str(), e)).collect()
    }
}

/// Simulate every record, optionally with ensemble bands. Each patent uses a
/// stream derived from `value.seed` and its position, so output does not
/// depend on thread count. Patents whose renewal history has zero probability
/// under `params` are reported as failures rather than aborting the batch.
pub fn simulate_batch(
    params: &ModelParams,
    elite: Option<&[ModelParams]>,
    records: &[PatentRecord],
    schedule: &FeeSchedule,
    config: &ModelConfig,
    value: &ValueConfig,
) -> Result<BatchValues> {
    let sim = ValueSimulator::new(params, schedule, config)?;
    let ensemble = elite.map(|e| Ensemble::new(e, schedule, config)).transpose()?;
    let outcomes: Vec<Result<ValueEstimate>> = records
        .par_iter()
        .enumerate()
        .map(|(i, rec)| {
            let seed = seeding::derive(value.seed, &[seeding::TAG_SIM, i as u64]);
            let mut est = sim.simulate(rec, value, seed)?;
            if let Some(ens) = &ensemble {
                let ens_seed = seeding::derive(value.seed, &[seeding::TAG_ENSEMBLE, i as u64]);
                est.ensemble = Some(ens.summarize(
                    rec,
                    value.ensemble_draws,
                    ens_seed,
                    value.ensemble_statistic,
                    value.max_skip_fraction,
                )?);
            }
            Ok(est)
        })
        .collect();
    let mut out = BatchValues {
        estimates: Vec::new(),
        failures: Vec::new(),
    };
    for (rec, o) in records.iter().zip(outcomes) {
        match o {
            Ok(e) => out.estimates.push(e),
            Err(e @ (Error::Sampling { .. } | Error::ModelValidity(_) | Error::Ensemble { .. })) => {
                out.failures.push(ValueFailure {
                    patent_id: rec.patent_id.clone(),
                    reason: e.to_string(),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fee_schedule::{builtin_schedule, FeeEntry};
    use crate::model::{Ownership, TechField};

    fn record(expiry: u32) -> PatentRecord {
        PatentRecord {
            patent_id: format!("P{expiry}"),
            application_year: 2000,
            expiry_age: expiry,
            covariates: CovariateVector {
                family_size: 2.99,
                inventor_size: 2.45,
                grant_lag: 7.25,
                tech_scope: 1.06,
                tech_field: TechField::Chemical,
                ownership: Ownership::Domestic,
            },
            tech_field_raw: "chemical".into(),
            ownership_raw: "domestic".into(),
        }
    }

    #[test]
    fn interval_shapes() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let p = ModelParams::published_india();
        let x = record(2).covariates;
        let last = epsilon_bounds(&p, &x, 20, &india, &cfg).unwrap();
        assert_eq!(last.upper, f64::INFINITY);
        assert!(last.lower.is_finite());
        let first = epsilon_bounds(&p, &x, 2, &india, &cfg).unwrap();
        assert_eq!(first.lower, f64::NEG_INFINITY);

        let table = ThresholdTable::build(&india, p.d, &cfg).unwrap();
        let idx = model::linear_index(&p.beta, &x);
        let mid = epsilon_bounds(&p, &x, 7, &india, &cfg).unwrap();
        let th6 = model::threshold(&india, p.d, &cfg, 6).unwrap();
        let th7 = model::threshold(&india, p.d, &cfg, 7).unwrap();
        assert_eq!(mid.lower, th6 - idx);
        assert_eq!(mid.upper, th7 - idx);
        assert_eq!(table.log_r0_bounds(7).unwrap(), (th6, th7));
    }

    #[test]
    fn centered_never_renewed_interval() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let mut p = ModelParams::published_india();
        let x = record(2).covariates;
        let th = ThresholdTable::build(&india, p.d, &cfg).unwrap().values[0];
        p.beta.intercept += th - model::linear_index(&p.beta, &x);
        let iv = epsilon_bounds(&p, &x, 2, &india, &cfg).unwrap();
        assert_eq!(iv.lower, f64::NEG_INFINITY);
        assert!(iv.upper.abs() < 1e-12);
    }

    #[test]
    fn inverted_interval_is_a_validity_error() {
        assert!(matches!(EpsilonInterval::new(2.0, 1.0), Err(Error::ModelValidity(_))));
    }

    #[test]
    fn draws_stay_inside_far_tail_intervals() {
        for (lo, hi) in [(40.0, 41.0), (-1e3, -999.0), (200.0, f64::INFINITY), (6.5, 7.0), (-7.0, -6.0)] {
            let iv = EpsilonInterval::new(lo, hi).unwrap();
            let draws = sample_truncated_normal(1.0, iv, 2000, 3).unwrap();
            assert!(draws.iter().all(|&e| iv.contains(e)), "[{lo}, {hi}]");
        }
    }

    #[test]
    fn tiny_sigma_clamps_zero_into_interval() {
        let iv = EpsilonInterval::new(1.0, 2.0).unwrap();
        let draws = sample_truncated_normal(1e-9, iv, 100, 1).unwrap();
        assert!(draws.iter().all(|&e| (e - 1.0).abs() < 1e-6));
        let iv = EpsilonInterval::new(-3.0, 2.0).unwrap();
        let draws = sample_truncated_normal(1e-9, iv, 100, 1).unwrap();
        assert!(draws.iter().all(|&e| e.abs() < 1e-7));
    }

    #[test]
    fn point_interval_has_no_mass() {
        let iv = EpsilonInterval::new(1.0, 1.0).unwrap();
        assert!(matches!(sample_truncated_normal(1.0, iv, 10, 1), Err(Error::Sampling { .. })));
    }

    #[test]
    fn one_period_discount() {
        let s = FeeSchedule::new(
            "none",
            "USD",
            vec![FeeEntry {
                age_from: 5,
                age_to: 5,
                annual_cost: 0.0,
            }],
            20,
        )
        .unwrap();
        let cfg = ModelConfig::default();
        let d: f64 = 0.2;
        let r0 = 110.0 * d.exp();
        assert!((net_present_value(r0, d, &s, &cfg, 1).unwrap() - 100.0).abs() < 1e-12);
        let undiscounted = ModelConfig {
            discount_rate: 0.0,
            ..ModelConfig::default()
        };
        assert!((net_present_value(3.0, 0.0, &s, &undiscounted, 7).unwrap() - 21.0).abs() < 1e-12);
    }

    #[test]
    fn costs_only_convention() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig {
            npv_convention: NpvConvention::CostsOnly,
            ..ModelConfig::default()
        };
        let v = net_present_value(100.0, 0.3, &india, &cfg, 4).unwrap();
        let want: f64 = (1..=4).map(|t| 100.0 * (-0.3 * t as f64).exp()).sum::<f64>()
            - 54.81 * (1.1f64.powi(-3) + 1.1f64.powi(-4));
        assert!((v - want).abs() < 1e-10);
    }

    #[test]
    fn never_renewed_median_below_fee_ratio() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let p = ModelParams::published_india();
        let est = simulate_initial_return(&p, &record(2), &india, &cfg, 5000, 9).unwrap();
        let cap = 54.81 / model::z_factor(p.d, 0.1, 3.0).unwrap();
        assert!(est.r0_median <= cap);
        assert!(est.r0_quantiles.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(est.npv_mean.is_finite() && est.npv_median.is_finite());
    }

    #[test]
    fn single_draw_flags_unreliable_se() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let est = simulate_initial_return(&ModelParams::published_india(), &record(9), &india, &cfg, 1, 2).unwrap();
        assert_eq!(est.draws_used, 1);
        assert!(!est.mc_se_reliable);
    }

    #[test]
    fn identical_elite_collapses_band() {
        let india = builtin_schedule("india").unwrap();
        let cfg = ModelConfig::default();
        let p = ModelParams::published_india();
        let elite = vec![p; 200];
        let rec = record(12);
        let summary = ensemble_value(&elite, &rec, &india, &cfg, 300, 5).unwrap();
        assert_eq!(summary.members_used, 200);
        // Same parameters but independent streams: the band reflects MC noise only.
        let single = ValueSimulator::new(&p, &india, &cfg).unwrap();
        let se = 6.07 / (300f64).sqrt();
        assert!((summary.log_r0 - single.mean_log_r0(&rec, 300, 1).unwrap()).abs() < 4.0 * se);
    }
}
